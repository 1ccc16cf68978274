#include "cornerhom/exact_sequence.hpp"

#include <algorithm>
#include <stdexcept>

#include "cornerhom/lattice.hpp"
#include "cornerhom/smith.hpp"

namespace cornerhom {

IntegerMatrix ChainMap::matrix(int degree) const {
    const int lo = source.bottom_degree();
    if (source.empty() || degree < lo || degree > source.top_degree())
        return IntegerMatrix::zero(target.rank(degree + degree_shift), source.rank(degree));
    return matrices[static_cast<std::size_t>(degree - lo)];
}

std::vector<int> verify_chain_map(const ChainMap& f) {
    if (f.degree_shift != 0) throw std::invalid_argument("verify_chain_map: only degree-preserving maps");
    std::vector<int> bad;
    const int lo = std::min(f.source.bottom_degree(), f.target.bottom_degree());
    const int hi = std::max(f.source.top_degree(), f.target.top_degree());
    for (int k = lo; k <= hi; ++k) {
        const IntegerMatrix lhs = f.target.boundary(k) * f.matrix(k);
        const IntegerMatrix rhs = f.matrix(k - 1) * f.source.boundary(k);
        if (!(lhs == rhs)) bad.push_back(k);
    }
    return bad;
}

namespace {

int joint_lo(const ShortExactSequence& s) {
    return std::min({s.a().bottom_degree(), s.b().bottom_degree(), s.c().bottom_degree()});
}
int joint_hi(const ShortExactSequence& s) {
    return std::max({s.a().top_degree(), s.b().top_degree(), s.c().top_degree()});
}

IntegerMatrix order_relations(const IntegerVector& orders) {
    std::vector<IntegerVector> cols;
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (orders[i] != 0) {
            IntegerVector e(orders.size());
            e[i] = orders[i];
            cols.push_back(std::move(e));
        }
    return IntegerMatrix::from_columns(orders.size(), cols);
}

}  // namespace

std::vector<std::string> verify_short_exact(const ShortExactSequence& s) {
    std::vector<std::string> issues;
    if (s.inclusion.degree_shift != 0 || s.projection.degree_shift != 0) {
        issues.emplace_back("maps must preserve degree");
        return issues;
    }
    if (!(s.inclusion.target == s.projection.source)) issues.emplace_back("middle complexes differ");
    for (int k : verify_chain_map(s.inclusion)) issues.push_back("i is not a chain map in degree " + std::to_string(k));
    for (int k : verify_chain_map(s.projection)) issues.push_back("p is not a chain map in degree " + std::to_string(k));
    for (int k = joint_lo(s); k <= joint_hi(s); ++k) {
        const IntegerMatrix i = s.inclusion.matrix(k), p = s.projection.matrix(k);
        const std::string deg = " in degree " + std::to_string(k);
        if (rank(i) != s.a().rank(k)) issues.push_back("i not injective" + deg);
        const auto ps = smith_normal_form(p);
        bool onto = ps.rank() == s.c().rank(k);
        for (const auto& d : ps.invariant_factors()) onto = onto && d == 1;
        if (!onto) issues.push_back("p not surjective" + deg);
        if (!(p * i).is_zero()) issues.push_back("p o i != 0" + deg);
        else if (!in_column_span(i, kernel_basis(p))) issues.push_back("ker p not contained in im i" + deg);
    }
    return issues;
}

IntegerVector connecting_class_of_lift(const ShortExactSequence& s, int degree, const IntegerVector& lift) {
    const IntegerVector db = s.b().boundary(degree) * lift;
    auto a = solve(s.inclusion.matrix(degree - 1), db);
    if (!a) throw std::logic_error("connecting map: boundary of the lift does not come from A");
    return HomologyPresentation(s.a(), degree - 1).coordinates(*a);
}

IntegerMatrix connecting_homomorphism(const ShortExactSequence& s, int degree) {
    const HomologyPresentation hc(s.c(), degree);
    const HomologyPresentation ha(s.a(), degree - 1);
    IntegerMatrix out(ha.size(), hc.size());
    const IntegerMatrix p = s.projection.matrix(degree);
    const IntegerMatrix i = s.inclusion.matrix(degree - 1);
    const IntegerMatrix d = s.b().boundary(degree);
    for (std::size_t g = 0; g < hc.size(); ++g) {
        auto lift = solve(p, hc.representatives().column_vector(g));
        if (!lift) throw std::logic_error("connecting map: cycle of C does not lift through p");
        auto a = solve(i, d * *lift);
        if (!a) throw std::logic_error("connecting map: boundary of the lift does not come from A");
        const auto coords = ha.coordinates(*a);
        for (std::size_t r = 0; r < coords.size(); ++r) out(r, g) = coords[r];
    }
    return out;
}

bool is_exact_at(const IntegerMatrix& f, const IntegerVector& middle_orders, const IntegerMatrix& g,
                 const IntegerVector& target_orders) {
    const std::size_t m = middle_orders.size();
    if (m == 0) return true;
    const IntegerMatrix image = hconcat(f, order_relations(middle_orders));

    // im F (+ relations) inside ker G
    const IntegerMatrix gi = g * image;
    for (std::size_t r = 0; r < gi.rows(); ++r)
        for (std::size_t c = 0; c < gi.cols(); ++c) {
            const Integer& ord = target_orders[r];
            if (ord == 0 ? gi(r, c) != 0 : !mpz_divisible_p(gi(r, c).get_mpz_t(), ord.get_mpz_t())) return false;
        }

    // ker G inside im F (+ relations)
    const IntegerMatrix ker = kernel_basis(hconcat(g, order_relations(target_orders)));
    return in_column_span(image, ker.block(0, 0, m, ker.cols()));
}

std::string ExactnessJoint::describe() const {
    const char* where = position == Position::A ? "H(A)" : position == Position::B ? "H(B)" : "H(C)";
    return std::string(where) + "_" + std::to_string(degree) + (exact ? " exact" : " NOT exact");
}

bool LongExactSequenceReport::exact() const {
    return std::all_of(joints.begin(), joints.end(), [](const auto& j) { return j.exact; });
}

LongExactSequenceReport long_exact_sequence_check(const ShortExactSequence& s) {
    LongExactSequenceReport rep;
    rep.lo = joint_lo(s);
    rep.hi = joint_hi(s);
    const int lo = rep.lo, hi = rep.hi;

    std::vector<HomologyPresentation> pa, pb, pc;
    for (int k = lo - 1; k <= hi + 1; ++k) {
        pa.emplace_back(s.a(), k);
        pb.emplace_back(s.b(), k);
        pc.emplace_back(s.c(), k);
    }
    auto at = [lo](int k) { return static_cast<std::size_t>(k - lo + 1); };

    for (int k = lo; k <= hi; ++k) {
        rep.induced_inclusion.push_back(induced_map(pa[at(k)], pb[at(k)], s.inclusion.matrix(k)));
        rep.induced_projection.push_back(induced_map(pb[at(k)], pc[at(k)], s.projection.matrix(k)));
        rep.connecting.push_back(connecting_homomorphism(s, k));
    }
    auto inc = [&](int k) { return rep.induced_inclusion[static_cast<std::size_t>(k - lo)]; };
    auto proj = [&](int k) { return rep.induced_projection[static_cast<std::size_t>(k - lo)]; };
    auto conn = [&](int k) {
        if (k > hi || k < lo) return IntegerMatrix::zero(pa[at(k - 1)].size(), pc[at(k)].size());
        return rep.connecting[static_cast<std::size_t>(k - lo)];
    };

    using P = ExactnessJoint::Position;
    for (int k = hi; k >= lo; --k) {
        rep.joints.push_back({k, P::B, is_exact_at(inc(k), pb[at(k)].orders(), proj(k), pc[at(k)].orders())});
        rep.joints.push_back({k, P::C, is_exact_at(proj(k), pc[at(k)].orders(), conn(k), pa[at(k - 1)].orders())});
        rep.joints.push_back({k, P::A, is_exact_at(conn(k + 1), pa[at(k)].orders(), inc(k), pb[at(k)].orders())});
    }

    rep.homology_a = homology(s.a());
    rep.homology_b = homology(s.b());
    rep.homology_c = homology(s.c());
    return rep;
}

}  // namespace cornerhom
