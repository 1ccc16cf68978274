#include <map>
#include <random>

#include "doctest.h"

#include "cornerhom/equivariant.hpp"
#include "support/random_complexes.hpp"

using namespace cornerhom;

namespace {

CircleComplex point_model() { return CircleComplex::trivial(GradedFreeComplex::from_degree_zero({{"p"}}, {})); }

CircleComplex circle_model() {
    const auto base = GradedFreeComplex::from_degree_zero({{"p"}, {"c"}}, {IntegerMatrix{{0}}});
    return {base, {IntegerMatrix{{1}}, IntegerMatrix(0, 1)}};
}

struct Summary {
    std::size_t betti;
    IntegerVector torsion;
    bool operator==(const Summary&) const = default;
};

std::map<int, Summary> summarize(const std::vector<HomologyGroup>& hs) {
    std::map<int, Summary> out;
    for (const auto& h : hs) out[h.degree] = {h.betti, h.torsion};
    return out;
}

std::vector<std::size_t> bettis(const std::vector<HomologyGroup>& hs) {
    std::vector<std::size_t> b;
    for (const auto& h : hs) b.push_back(h.betti);
    return b;
}

// Independent construction: one big matrix on all pairs (g, k) with |k| <= K,
// restricted afterwards to the degrees of interest.
std::map<int, Summary> oracle_homology(const CircleComplex& x, Variant v, int lo, int hi) {
    struct Gen {
        int e;
        std::size_t i;
        int k;
    };
    std::vector<Gen> all;
    const int K = 20;
    for (int k = -K; k <= K; ++k) {
        if ((v == Variant::Plus && k < 0) || (v == Variant::Minus && k > 0)) continue;
        for (int e = x.base.bottom_degree(); e <= x.base.top_degree(); ++e)
            for (std::size_t i = 0; i < x.base.rank(e); ++i) all.push_back({e, i, k});
    }
    auto degree = [](const Gen& g) { return g.e - 2 * g.k; };
    std::map<int, std::vector<std::size_t>> by_degree;
    for (std::size_t n = 0; n < all.size(); ++n) by_degree[degree(all[n])].push_back(n);

    std::vector<std::vector<std::string>> labels;
    std::vector<IntegerMatrix> bnds;
    const int plo = lo - 1, phi = hi + 1;
    for (int d = plo; d <= phi; ++d) {
        std::vector<std::string> l;
        for (std::size_t n : by_degree[d]) l.push_back(std::to_string(n));
        labels.push_back(l);
        if (d == plo) continue;
        const auto& src = by_degree[d];
        const auto& tgt = by_degree[d - 1];
        IntegerMatrix m(tgt.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            const Gen g = all[src[c]];
            for (std::size_t r = 0; r < tgt.size(); ++r) {
                const Gen h = all[tgt[r]];
                if (h.k == g.k && h.e == g.e - 1) m(r, c) += x.base.boundary(g.e)(h.i, g.i);
                if (h.k == g.k + 1 && h.e == g.e + 1 && !(v == Variant::Minus && h.k > 0)) m(r, c) += x.j(g.e)(h.i, g.i);
            }
        }
        bnds.push_back(m);
    }
    const GradedFreeComplex total(plo, labels, bnds);
    std::map<int, Summary> out;
    for (const auto& h : homology(total))
        if (h.degree >= lo && h.degree <= hi) out[h.degree] = {h.betti, h.torsion};
    return out;
}

}  // namespace

TEST_CASE("circle complex verification") {
    CHECK(verify_circle_complex(point_model()).empty());
    CHECK(verify_circle_complex(circle_model()).empty());
    const auto base = GradedFreeComplex::from_degree_zero({{"p"}, {"c"}, {"e"}}, {IntegerMatrix{{0}}, IntegerMatrix{{0}}});
    const CircleComplex bad{base, {IntegerMatrix{{1}}, IntegerMatrix{{1}}, IntegerMatrix(0, 1)}};
    CHECK_FALSE(verify_circle_complex(bad).empty());
    CHECK_THROWS_AS(build_variant(bad, Variant::Plus, 0, 2), std::invalid_argument);
    // J D + D J != 0: D(c) = p... not a cycle-compatible rotation
    const auto line = GradedFreeComplex::from_degree_zero({{"p"}, {"c"}}, {IntegerMatrix{{1}}});
    const CircleComplex twisted{line, {IntegerMatrix{{1}}, IntegerMatrix(0, 1)}};
    CHECK_FALSE(verify_circle_complex(twisted).empty());
}

TEST_CASE("variants of the point and the circle") {
    SUBCASE("point, plus, [-6, 0]") {
        const auto e = build_variant(point_model(), Variant::Plus, -6, 0);
        for (int d = -6; d <= 0; ++d) CHECK(e.in_degree(d).size() == (d % 2 == 0 ? 1u : 0u));
        for (int d = -5; d <= 0; ++d) CHECK(e.complex.boundary(d).is_zero());
        CHECK(e.complex.generators(-4) == std::vector<std::string>{"p.u2"});
    }
    SUBCASE("circle, minus: p u^0 is a cycle") {
        const auto e = build_variant(circle_model(), Variant::Minus, -1, 3);
        REQUIRE(e.in_degree(0).size() == 1);
        CHECK(e.in_degree(0)[0].power == 0);
        CHECK(e.complex.boundary(0).is_zero());
        const auto l = build_variant(circle_model(), Variant::Laurent, -1, 3);
        CHECK_FALSE(l.complex.boundary(0).is_zero());
    }
    SUBCASE("laurent window of one degree is finite") {
        const auto e = build_variant(circle_model(), Variant::Laurent, 3, 3);
        CHECK(e.in_degree(3).size() == 1);
    }
}

TEST_CASE("equivariant homology of the point and the circle on [-6, 2]") {
    const auto pt_plus = equivariant_homology(point_model(), Variant::Plus, -6, 2);
    const auto pt_inf = equivariant_homology(point_model(), Variant::Laurent, -6, 2);
    const auto s1_plus = equivariant_homology(circle_model(), Variant::Plus, -6, 2);
    const auto s1_inf = equivariant_homology(circle_model(), Variant::Laurent, -6, 2);
    const auto s1_minus = equivariant_homology(circle_model(), Variant::Minus, -6, 2);
    REQUIRE(pt_plus.size() == 9);
    for (int i = 0; i < 9; ++i) {
        const int d = i - 6;
        const auto u = static_cast<std::size_t>(i);
        CHECK(pt_plus[u].betti == (d <= 0 && d % 2 == 0 ? 1u : 0u));
        CHECK(pt_inf[u].betti == (d % 2 == 0 ? 1u : 0u));
        CHECK(s1_plus[u].betti == (d == 1 ? 1u : 0u));
        CHECK(s1_inf[u].betti == 0u);
        CHECK(s1_minus[u].betti == (d == 0 ? 1u : 0u));
        for (const auto* h : {&pt_plus, &pt_inf, &s1_plus, &s1_inf, &s1_minus}) CHECK((*h)[u].torsion.empty());
    }
}

TEST_CASE("random circle complexes: construction invariants") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 25; ++trial) {
        const auto x = testing_support::random_circle_complex(rng, 1 + trial % 4);
        REQUIRE(verify_circle_complex(x).empty());
        for (const auto& m : x.rotation)
            for (const auto& v : m.data()) CHECK(abs(v) <= 3);
        for (Variant v : {Variant::Plus, Variant::Laurent, Variant::Minus}) {
            const int lo = -7 + trial % 3, hi = 3 + trial % 2;
            const auto e = build_variant(x, v, lo, hi);
            CHECK(verify_complex(e.complex).empty());
            for (int d = lo; d <= hi; ++d) {
                std::size_t count = 0;
                for (int k = -50; k <= 50; ++k)
                    if (power_allowed(v, k)) count += x.base.rank(d + 2 * k);
                CHECK(e.in_degree(d).size() == count);
            }
            CHECK(summarize(equivariant_homology(x, v, lo, hi)) == oracle_homology(x, v, lo, hi));
            // window stability
            const auto wide = summarize(equivariant_homology(x, v, lo - 3, hi + 3));
            for (const auto& [d, s] : summarize(equivariant_homology(x, v, lo, hi))) CHECK(wide.at(d) == s);
        }
        // 2-periodicity of the plus variant below degree 0
        const auto plus = summarize(equivariant_homology(x, Variant::Plus, -9, 0));
        for (int d = -1; d >= -7; --d) CHECK(plus.at(d) == plus.at(d - 2));
    }
}

TEST_CASE("trivial action splits by powers of u") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        const auto base = testing_support::random_complex(rng, 3, 3);
        const auto x = CircleComplex::trivial(base);
        const auto h = homology(base);
        const auto plus = summarize(equivariant_homology(x, Variant::Plus, -5, 3));
        for (int d = -5; d <= 3; ++d) {
            std::size_t b = 0;
            IntegerVector t;
            for (int k = 0; d + 2 * k <= 3; ++k)
                if (d + 2 * k >= 0) {
                    b += h[static_cast<std::size_t>(d + 2 * k)].betti;
                    for (const auto& f : h[static_cast<std::size_t>(d + 2 * k)].torsion) t.push_back(f);
                }
            CHECK(plus.at(d).betti == b);
            CHECK(plus.at(d).torsion.size() == t.size());
        }
    }
}

TEST_CASE("gysin sequence") {
    SUBCASE("point: u alternates iso and zero") {
        const auto r = gysin_check(point_model(), -6, 2);
        CHECK(r.passes());
        for (std::size_t i = 0; i < r.les.induced_inclusion.size(); ++i) {
            const int d = r.les.lo + static_cast<int>(i);
            const auto& m = r.les.induced_inclusion[i];
            if (d <= -2 && d % 2 == 0) CHECK(m == IntegerMatrix{{1}});
            else CHECK(m.is_zero());
        }
    }
    SUBCASE("circle: H+_1 -> H_1 is an isomorphism") {
        const auto r = gysin_check(circle_model(), -6, 2);
        CHECK(r.passes());
        const auto& p1 = r.les.induced_projection[static_cast<std::size_t>(1 - r.les.lo)];
        REQUIRE(p1.rows() == 1);
        REQUIRE(p1.cols() == 1);
        CHECK(abs(p1(0, 0)) == 1);
    }
    SUBCASE("random") {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 20; ++trial) {
            const auto x = testing_support::random_circle_complex(rng, 1 + trial % 4);
            const auto r = gysin_check(x, -5, 4);
            CHECK(r.sequence_issues.empty());
            CHECK(r.passes());
        }
    }
}

TEST_CASE("localization") {
    SUBCASE("point and circle") {
        const auto pt = localization_check(point_model(), -6, 2);
        CHECK(pt.passes());
        for (const auto& s : pt.stabilization) CHECK(s.laurent.betti == (s.degree % 2 == 0 ? 1u : 0u));
        const auto s1 = localization_check(circle_model(), -6, 2);
        CHECK(s1.passes());
        for (const auto& s : s1.stabilization) CHECK(s.laurent.is_zero());
    }
    SUBCASE("random") {
        std::mt19937_64 rng(123);
        for (int trial = 0; trial < 20; ++trial) {
            const auto x = testing_support::random_circle_complex(rng, 1 + trial % 4);
            const auto r = localization_check(x, -5, 4);
            CHECK(r.passes());
            CHECK(r.stabilization.size() == 10);
        }
    }
}

TEST_CASE("variant names") {
    CHECK(parse_variant("laurent") == Variant::Laurent);
    CHECK(to_string(Variant::Minus) == "minus");
    CHECK_THROWS_AS(parse_variant("infinity"), std::invalid_argument);
    CHECK(bettis(equivariant_homology(point_model(), Variant::Minus, 0, 2)) == std::vector<std::size_t>{1, 0, 1});
}
