#include "cornerhom/homology.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

#include "cornerhom/lattice.hpp"
#include "cornerhom/smith.hpp"

namespace cornerhom {

Coefficients Coefficients::modular(int m) {
    if (m <= 1) throw std::invalid_argument("coefficient modulus must be >= 2, got " + std::to_string(m));
    return {Kind::Modular, m};
}

Coefficients Coefficients::parse(const std::string& text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "z") return integers();
    if (t == "q") return rationals();
    if (t.size() > 1 && t[0] == 'z') {
        const std::string digits = t.substr(1);
        for (char c : digits)
            if (!std::isdigit(static_cast<unsigned char>(c))) throw std::invalid_argument("bad coefficient ring '" + text + "'");
        return modular(std::stoi(digits));
    }
    throw std::invalid_argument("bad coefficient ring '" + text + "' (expected z, q or zN)");
}

std::string Coefficients::to_string() const {
    switch (kind) {
        case Kind::Integers: return "Z";
        case Kind::Rationals: return "Q";
        case Kind::Modular: return "Z" + std::to_string(modulus);
    }
    return "?";
}

std::string HomologyGroup::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (betti > 0) {
        os << "Z";
        if (betti > 1) os << "^" << betti;
        first = false;
    }
    for (const auto& t : torsion) {
        os << (first ? "" : " + ") << "Z/" << t.get_str();
        first = false;
    }
    return os.str();
}

namespace {

IntegerVector nontrivial_factors(const IntegerMatrix& relations) {
    IntegerVector out;
    for (const auto& d : smith_normal_form(relations).invariant_factors())
        if (d > 1) out.push_back(d);
    return out;
}

}  // namespace

IntegerVector modular_invariant_factors(const GradedFreeComplex& x, int degree, int m) {
    if (m <= 1) throw std::invalid_argument("modulus must be >= 2");
    const std::size_t n = x.rank(degree);
    const std::size_t below = x.rank(degree - 1);
    const IntegerMatrix mk = IntegerMatrix::diagonal(IntegerVector(n, m), n, n);

    // basis of {v : D_k v = 0 mod m}; the kernel of [D_k | m I] projects injectively
    IntegerMatrix cycles;
    if (below == 0) {
        cycles = IntegerMatrix::identity(n);
    } else {
        const IntegerMatrix mb = IntegerMatrix::diagonal(IntegerVector(below, m), below, below);
        const IntegerMatrix ker = kernel_basis(hconcat(x.boundary(degree), mb));
        cycles = ker.block(0, 0, n, ker.cols());
    }
    const IntegerMatrix boundaries = hconcat(x.boundary(degree + 1), mk);
    auto rel = solve(cycles, boundaries);
    if (!rel) throw std::logic_error("boundaries are not cycles mod m");
    return nontrivial_factors(*rel);
}

std::vector<HomologyGroup> homology(const GradedFreeComplex& x, Coefficients coeff) {
    if (!verify_complex(x).empty()) throw std::invalid_argument("homology: input is not a chain complex (D*D != 0)");
    if (x.modulus() != 0) {
        if (coeff.kind != Coefficients::Kind::Modular || coeff.modulus != x.modulus())
            throw std::invalid_argument("complex is defined mod " + std::to_string(x.modulus()) +
                                        "; homology needs matching Z" + std::to_string(x.modulus()) + " coefficients");
    }
    std::vector<HomologyGroup> out;
    if (x.empty()) return out;

    if (coeff.kind == Coefficients::Kind::Modular) {
        for (int k = x.bottom_degree(); k <= x.top_degree(); ++k)
            out.push_back({k, modular_invariant_factors(x, k, coeff.modulus).size(), {}});
        return out;
    }

    // ranks and invariant factors of every boundary, computed once
    const int lo = x.bottom_degree(), hi = x.top_degree();
    std::vector<std::size_t> ranks(static_cast<std::size_t>(hi - lo + 2), 0);
    std::vector<IntegerVector> factors(ranks.size());
    for (int k = lo + 1; k <= hi; ++k) {
        const auto s = smith_normal_form(x.boundary(k));
        ranks[static_cast<std::size_t>(k - lo)] = s.rank();
        factors[static_cast<std::size_t>(k - lo)] = s.invariant_factors();
    }
    for (int k = lo; k <= hi; ++k) {
        const auto idx = static_cast<std::size_t>(k - lo);
        HomologyGroup g;
        g.degree = k;
        g.betti = x.rank(k) - ranks[idx] - ranks[idx + 1];
        if (coeff.kind == Coefficients::Kind::Integers)
            for (const auto& d : factors[idx + 1])
                if (d > 1) g.torsion.push_back(d);
        out.push_back(std::move(g));
    }
    return out;
}

HomologyPresentation::HomologyPresentation(const GradedFreeComplex& x, int degree) : degree_(degree) {
    if (x.modulus() != 0) throw std::invalid_argument("homology presentations are only defined over Z");
    const std::size_t n = x.rank(degree);
    cycles_ = kernel_basis(x.boundary(degree));
    auto rel = solve(cycles_, x.boundary(degree + 1));
    if (!rel) throw std::logic_error("boundaries are not cycles");
    const auto s = smith_normal_form(*rel);
    to_smith_ = s.left;
    const std::size_t z = cycles_.cols(), r = s.rank();
    const IntegerMatrix gens = cycles_ * s.left_inverse;
    std::vector<IntegerVector> reps;
    for (std::size_t i = 0; i < z; ++i) {
        if (i < r && s.diagonal(i, i) == 1) continue;
        kept_.push_back(i);
        orders_.push_back(i < r ? s.diagonal(i, i) : Integer(0));
        reps.push_back(gens.column_vector(i));
    }
    representatives_ = IntegerMatrix::from_columns(n, reps);
}

IntegerVector HomologyPresentation::reduce(IntegerVector coords) const {
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (orders_[i] != 0) {
            coords[i] %= orders_[i];
            if (coords[i] < 0) coords[i] += orders_[i];
        }
    return coords;
}

IntegerVector HomologyPresentation::coordinates(const IntegerVector& cycle) const {
    auto y = solve(cycles_, cycle);
    if (!y) throw std::logic_error("coordinates requested for a chain that is not a cycle");
    const IntegerVector full = to_smith_ * *y;
    IntegerVector out;
    out.reserve(kept_.size());
    for (std::size_t i : kept_) out.push_back(full[i]);
    return reduce(std::move(out));
}

IntegerMatrix induced_map(const HomologyPresentation& source, const HomologyPresentation& target,
                          const IntegerMatrix& chain_matrix) {
    IntegerMatrix out(target.size(), source.size());
    const IntegerMatrix images = chain_matrix * source.representatives();
    for (std::size_t c = 0; c < source.size(); ++c) {
        const auto coords = target.coordinates(images.column_vector(c));
        for (std::size_t r = 0; r < coords.size(); ++r) out(r, c) = coords[r];
    }
    return out;
}

}  // namespace cornerhom
