#include "cornerhom/equivariant.hpp"

#include <algorithm>
#include <stdexcept>

namespace cornerhom {

CircleComplex CircleComplex::trivial(GradedFreeComplex base) {
    CircleComplex x{std::move(base), {}};
    for (int k = x.base.bottom_degree(); k <= x.base.top_degree(); ++k)
        x.rotation.push_back(IntegerMatrix::zero(x.base.rank(k + 1), x.base.rank(k)));
    return x;
}

IntegerMatrix CircleComplex::j(int degree) const {
    const auto idx = degree - base.bottom_degree();
    if (idx < 0 || idx >= static_cast<int>(rotation.size())) return IntegerMatrix::zero(base.rank(degree + 1), base.rank(degree));
    return rotation[static_cast<std::size_t>(idx)];
}

std::vector<std::string> verify_circle_complex(const CircleComplex& x) {
    std::vector<std::string> issues;
    for (int k : verify_complex(x.base)) issues.push_back("D D != 0 in degree " + std::to_string(k));
    const int lo = x.base.bottom_degree(), hi = x.base.top_degree();
    if (!x.rotation.empty() && x.rotation.size() != static_cast<std::size_t>(hi - lo + 1))
        issues.emplace_back("expected one rotation matrix per degree");
    for (std::size_t i = 0; i < x.rotation.size(); ++i) {
        const int k = lo + static_cast<int>(i);
        if (x.rotation[i].rows() != x.base.rank(k + 1) || x.rotation[i].cols() != x.base.rank(k))
            issues.push_back("rotation matrix of degree " + std::to_string(k) + " has the wrong shape");
    }
    if (!issues.empty()) return issues;
    for (int k = lo; k <= hi; ++k) {
        if (!(x.j(k - 1) * x.base.boundary(k) + x.base.boundary(k + 1) * x.j(k)).is_zero())
            issues.push_back("J D + D J != 0 on degree " + std::to_string(k));
        if (!(x.j(k + 1) * x.j(k)).is_zero()) issues.push_back("J J != 0 on degree " + std::to_string(k));
    }
    return issues;
}

std::string to_string(Variant v) {
    switch (v) {
        case Variant::Plus: return "plus";
        case Variant::Laurent: return "laurent";
        case Variant::Minus: return "minus";
    }
    return "?";
}

Variant parse_variant(const std::string& text) {
    if (text == "plus") return Variant::Plus;
    if (text == "laurent") return Variant::Laurent;
    if (text == "minus") return Variant::Minus;
    throw std::invalid_argument("unknown variant '" + text + "' (expected plus, laurent or minus)");
}

bool power_allowed(Variant v, int k) {
    switch (v) {
        case Variant::Plus: return k >= 0;
        case Variant::Laurent: return true;
        case Variant::Minus: return k <= 0;
    }
    return false;
}

const std::vector<EquivariantGenerator>& EquivariantComplex::in_degree(int d) const {
    static const std::vector<EquivariantGenerator> none;
    if (d < lo || d > hi) return none;
    return generators[static_cast<std::size_t>(d - lo)];
}

namespace {

int floor_div2(int a) { return a >= 0 ? a / 2 : -((-a + 1) / 2); }

std::vector<EquivariantGenerator> generators_in(const GradedFreeComplex& base, Variant v, int d) {
    std::vector<EquivariantGenerator> out;
    if (base.empty()) return out;
    // deg g = d + 2k within [bottom, top]; k increasing
    const int kmin = -floor_div2(d - base.bottom_degree());
    const int kmax = floor_div2(base.top_degree() - d);
    for (int k = kmin; k <= kmax; ++k) {
        if (!power_allowed(v, k)) continue;
        const int e = d + 2 * k;
        for (std::size_t i = 0; i < base.rank(e); ++i) out.push_back({e, i, k});
    }
    return out;
}

std::string label(const GradedFreeComplex& base, const EquivariantGenerator& g) {
    return base.generators(g.base_degree)[g.base_index] + ".u" + std::to_string(g.power);
}

void require_verified(const CircleComplex& x) {
    const auto issues = verify_circle_complex(x);
    if (!issues.empty()) throw std::invalid_argument("circle complex fails verification: " + issues.front());
}

// position of (degree, index, power) in a generator list
std::size_t position(const std::vector<EquivariantGenerator>& gens, int e, std::size_t i, int k) {
    const auto it = std::find(gens.begin(), gens.end(), EquivariantGenerator{e, i, k});
    if (it == gens.end()) throw std::logic_error("equivariant generator missing from its degree");
    return static_cast<std::size_t>(it - gens.begin());
}

}  // namespace

EquivariantComplex build_variant(const CircleComplex& x, Variant v, int lo, int hi) {
    require_verified(x);
    if (lo > hi) throw std::invalid_argument("empty degree window");
    EquivariantComplex out;
    out.variant = v;
    out.lo = lo;
    out.hi = hi;
    for (int d = lo; d <= hi; ++d) out.generators.push_back(generators_in(x.base, v, d));

    std::vector<std::vector<std::string>> labels;
    for (const auto& gens : out.generators) {
        std::vector<std::string> l;
        for (const auto& g : gens) l.push_back(label(x.base, g));
        labels.push_back(std::move(l));
    }
    std::vector<IntegerMatrix> bnds;
    for (int d = lo + 1; d <= hi; ++d) {
        const auto& src = out.in_degree(d);
        const auto& tgt = out.in_degree(d - 1);
        IntegerMatrix m(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            const auto& g = src[c];
            const IntegerMatrix dm = x.base.boundary(g.base_degree);
            for (std::size_t r = 0; r < dm.rows(); ++r)
                if (dm(r, g.base_index) != 0) m(position(tgt, g.base_degree - 1, r, g.power), c) += dm(r, g.base_index);
            if (!power_allowed(v, g.power + 1)) continue;  // minus: the u^{k+1} term is killed
            const IntegerMatrix jm = x.j(g.base_degree);
            for (std::size_t r = 0; r < jm.rows(); ++r)
                if (jm(r, g.base_index) != 0) m(position(tgt, g.base_degree + 1, r, g.power + 1), c) += jm(r, g.base_index);
        }
        bnds.push_back(std::move(m));
    }
    out.complex = GradedFreeComplex(lo, std::move(labels), std::move(bnds));
    if (!verify_complex(out.complex).empty()) throw std::logic_error("twisted differential does not square to zero");
    return out;
}

std::vector<HomologyGroup> equivariant_homology(const CircleComplex& x, Variant v, int lo, int hi, Coefficients coeff) {
    const auto padded = build_variant(x, v, lo - 2, hi + 2);
    std::vector<HomologyGroup> out;
    for (const auto& h : homology(padded.complex, coeff))
        if (h.degree >= lo && h.degree <= hi) out.push_back(h);
    return out;
}

namespace {

// multiplication by u from C+ in degrees [lo+2, hi+2] (regraded to [lo, hi]) into `target`
ChainMap multiply_by_u(const CircleComplex& x, const EquivariantComplex& target, int lo, int hi) {
    const auto source = build_variant(x, Variant::Plus, lo + 2, hi + 2);
    ChainMap f{source.complex.shifted(-2), target.complex, 0, {}};
    for (int d = lo; d <= hi; ++d) {
        const auto& src = source.in_degree(d + 2);
        const auto& tgt = target.in_degree(d);
        IntegerMatrix m(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            m(position(tgt, src[c].base_degree, src[c].base_index, src[c].power + 1), c) = 1;
        f.matrices.push_back(std::move(m));
    }
    return f;
}

}  // namespace

ShortExactSequence gysin_sequence(const CircleComplex& x, int lo, int hi) {
    require_verified(x);
    const int plo = lo - 2, phi = hi + 2;
    const auto plus = build_variant(x, Variant::Plus, plo, phi);
    const GradedFreeComplex base = x.base.truncated(plo, phi);

    ChainMap p{plus.complex, base, 0, {}};
    for (int d = plo; d <= phi; ++d) {
        const auto& src = plus.in_degree(d);
        IntegerMatrix m(base.rank(d), src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            if (src[c].power == 0) m(src[c].base_index, c) = 1;
        p.matrices.push_back(std::move(m));
    }
    return {multiply_by_u(x, plus, plo, phi), p};
}

ShortExactSequence localization_sequence(const CircleComplex& x, int lo, int hi) {
    require_verified(x);
    const int plo = lo - 2, phi = hi + 2;
    const auto laurent = build_variant(x, Variant::Laurent, plo, phi);
    const auto minus = build_variant(x, Variant::Minus, plo, phi);

    ChainMap p{laurent.complex, minus.complex, 0, {}};
    for (int d = plo; d <= phi; ++d) {
        const auto& src = laurent.in_degree(d);
        const auto& tgt = minus.in_degree(d);
        IntegerMatrix m(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            if (src[c].power <= 0) m(position(tgt, src[c].base_degree, src[c].base_index, src[c].power), c) = 1;
        p.matrices.push_back(std::move(m));
    }
    return {multiply_by_u(x, laurent, plo, phi), p};
}

GysinReport gysin_check(const CircleComplex& x, int lo, int hi) {
    const auto s = gysin_sequence(x, lo, hi);
    GysinReport r;
    r.sequence_issues = verify_short_exact(s);
    if (r.sequence_issues.empty()) r.les = long_exact_sequence_check(s);
    return r;
}

bool LocalizationReport::passes() const {
    return sequence_issues.empty() && les.exact() &&
           std::all_of(stabilization.begin(), stabilization.end(), [](const auto& s) { return s.equal; });
}

LocalizationReport localization_check(const CircleComplex& x, int lo, int hi) {
    const auto s = localization_sequence(x, lo, hi);
    LocalizationReport r;
    r.sequence_issues = verify_short_exact(s);
    if (r.sequence_issues.empty()) r.les = long_exact_sequence_check(s);

    // below the bottom base degree the constraint k >= 0 is automatic, so C+ and
    // C^inf agree there; H^inf is 2-periodic
    const int b = x.base.empty() ? 0 : x.base.bottom_degree();
    const auto laurent = equivariant_homology(x, Variant::Laurent, lo, hi);
    const auto stable = equivariant_homology(x, Variant::Plus, b - 2, b - 1);
    for (const auto& h : laurent) {
        StabilizationCheck c;
        c.degree = h.degree;
        c.stable_degree = ((h.degree - (b - 1)) % 2 == 0) ? b - 1 : b - 2;
        c.laurent = h;
        c.plus = stable[static_cast<std::size_t>(c.stable_degree - (b - 2))];
        c.equal = c.laurent.betti == c.plus.betti && c.laurent.torsion == c.plus.torsion;
        r.stabilization.push_back(std::move(c));
    }
    return r;
}

}  // namespace cornerhom
