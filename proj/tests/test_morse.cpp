#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"

#include "cornerhom/cubical.hpp"
#include "cornerhom/morse.hpp"
#include "cornerhom/smith.hpp"

using namespace cornerhom;

namespace {

double dist(const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]); }

std::vector<std::size_t> bettis(const std::vector<HomologyGroup>& hs) {
    std::vector<std::size_t> b;
    for (const auto& h : hs) b.push_back(h.betti);
    return b;
}

std::vector<int> indices(const std::vector<CriticalPoint>& pts) {
    std::vector<int> out;
    for (const auto& p : pts) out.push_back(p.index);
    return out;
}

const MorseRun& catalog_run(const std::string& name) {
    static std::map<std::string, MorseRun> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const auto c = catalog_surface(name);
        it = cache.emplace(name, run_morse(c.surface, c.function)).first;
    }
    return it->second;
}

// tensor product of chain complexes over Z with the Koszul sign
GradedFreeComplex tensor(const GradedFreeComplex& a, const GradedFreeComplex& b) {
    const int top = a.top_degree() + b.top_degree();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> basis(static_cast<std::size_t>(top + 1));
    std::vector<std::vector<std::pair<int, int>>> degs(static_cast<std::size_t>(top + 1));
    std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(top + 1));
    for (int p = 0; p <= a.top_degree(); ++p)
        for (int q = 0; q <= b.top_degree(); ++q)
            for (std::size_t i = 0; i < a.rank(p); ++i)
                for (std::size_t j = 0; j < b.rank(q); ++j) {
                    const auto n = static_cast<std::size_t>(p + q);
                    basis[n].emplace_back(i, j);
                    degs[n].emplace_back(p, q);
                    labels[n].push_back(a.generators(p)[i] + "*" + b.generators(q)[j]);
                }
    std::vector<IntegerMatrix> bnds;
    for (int n = 1; n <= top; ++n) {
        const auto un = static_cast<std::size_t>(n);
        IntegerMatrix m(basis[un - 1].size(), basis[un].size());
        for (std::size_t c = 0; c < basis[un].size(); ++c) {
            const auto [p, q] = degs[un][c];
            const auto [i, j] = basis[un][c];
            for (std::size_t r = 0; r < basis[un - 1].size(); ++r) {
                const auto [p2, q2] = degs[un - 1][r];
                const auto [i2, j2] = basis[un - 1][r];
                if (p2 == p - 1 && q2 == q && j2 == j) m(r, c) += a.boundary(p)(i2, i);
                if (p2 == p && q2 == q - 1 && i2 == i) m(r, c) += (p % 2 ? -1 : 1) * b.boundary(q)(j2, j);
            }
        }
        bnds.push_back(m);
    }
    return GradedFreeComplex::from_degree_zero(labels, bnds);
}

CriticalPoint symbolic(const std::string& label, double value, int index) {
    CriticalPoint c;
    c.label = label;
    c.value = value;
    c.index = index;
    return c;
}

}  // namespace

TEST_CASE("expression parsing and evaluation") {
    const Vec3 p{0.3, -1.2, 2.0};
    CHECK(Expression::parse("x^2 + y^2 + z^2 - 1").value(p) == doctest::Approx(0.09 + 1.44 + 4 - 1));
    CHECK(Expression::parse("-x^2").value(p) == doctest::Approx(-0.09));
    CHECK(Expression::parse("2^-1").value(p) == doctest::Approx(0.5));
    CHECK(Expression::parse("y^3").value(p) == doctest::Approx(-1.728));
    CHECK(Expression::parse("sqrt(4) * exp(0) / 3/4").value(p) == doctest::Approx(2.0 / 3 / 4));
    CHECK(Expression::parse("pow(z, 0.5)").value(p) == doctest::Approx(std::sqrt(2.0)));
    CHECK(Expression::parse("1.5e1 - .5").value(p) == doctest::Approx(14.5));

    SUBCASE("errors carry a column") {
        try {
            Expression::parse("x + * y");
            FAIL("expected a parse error");
        } catch (const ExpressionError& e) {
            CHECK(e.column() == 5);
        }
        CHECK_THROWS_AS(Expression::parse("sin(x)"), ExpressionError);
        CHECK_THROWS_AS(Expression::parse("(x + 1"), ExpressionError);
        CHECK_THROWS_AS(Expression::parse("x y"), ExpressionError);
        CHECK_THROWS_AS(Expression::parse(""), ExpressionError);
    }
    SUBCASE("printing round-trips") {
        for (const char* text : {"(sqrt(x^2 + y^2) - 2)^2 + z^2 - 1", "-x*y/3 + exp(-z)", "pow(x^2 + 1, 1/3) - 0.1"}) {
            const auto e = Expression::parse(text);
            const auto back = Expression::parse(e.to_string());
            CHECK(back.to_string() == e.to_string());
            CHECK(back.value(p) == e.value(p));
        }
    }
}

TEST_CASE("jets agree with central differences") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.3, 1.7);
    const char* exprs[] = {"(sqrt(x^2 + y^2) - 2)^2 + z^2 - 1", "(y^2 - x^2*(3 - x^2))^2 + z^2 - 1",
                           "x^2 + y^2 + (z - x^2)^2 - 1", "exp(x*y) / (1 + z^2)", "pow(x, y) + x^-2 - sqrt(z)"};
    for (const char* text : exprs) {
        const auto e = Expression::parse(text);
        for (int trial = 0; trial < 20; ++trial) {
            const Vec3 p{u(rng), u(rng), u(rng)};
            const Jet j = e.jet(p);
            CHECK(j.value == doctest::Approx(e.value(p)));
            const double h = 1e-5;
            for (std::size_t a = 0; a < 3; ++a) {
                Vec3 pp = p, pm = p;
                pp[a] += h;
                pm[a] -= h;
                CHECK(j.gradient[a] == doctest::Approx((e.value(pp) - e.value(pm)) / (2 * h)).epsilon(1e-6));
                const Jet jp = e.jet(pp), jm = e.jet(pm);
                for (std::size_t b = 0; b < 3; ++b)
                    CHECK(j.hessian[a][b] == doctest::Approx((jp.gradient[b] - jm.gradient[b]) / (2 * h)).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("catalog surfaces are regular") {
    for (const auto& name : catalog_names()) CHECK(regularity_violations(catalog_surface(name).surface).empty());
    Surface squared;
    squared.constraint = Expression::parse("(x^2 + y^2 + z^2 - 1)^2");
    squared.box = {{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
    CHECK_FALSE(regularity_violations(squared, 6).empty());
    CHECK_THROWS_AS(catalog_surface("klein"), std::invalid_argument);
}

TEST_CASE("classification") {
    const auto sphere = catalog_surface("sphere");
    const auto top = classify_critical_point(sphere.surface, sphere.function, {0, 0, 1}, 0.5);
    CHECK(top.index == 2);
    CHECK(top.neg_eigenvalues[0] == doctest::Approx(-1));
    MorseFunctionSpec down{-sphere.function.f};
    CHECK(classify_critical_point(sphere.surface, down, {0, 0, 1}, -0.5).index == 0);

    const auto torus = catalog_surface("torus");
    // at (-1, 0, 0): grad F = (2, 0, 0) and grad f = (1, 0, 0), so lambda = 1/2
    const auto inner = classify_critical_point(torus.surface, torus.function, {-1, 0, 0}, 0.5);
    CHECK(inner.index == 1);
    // curvature of the inner circle (radius 1) against that of the tube (radius 1)
    CHECK(inner.neg_eigenvalues[0] == doctest::Approx(-1));
    CHECK(inner.pos_eigenvalues[0] == doctest::Approx(1));
    CHECK(std::abs(inner.neg_frame[0][2]) == doctest::Approx(1));
    CHECK(inner.neg_frame[0][2] > 0);

    SUBCASE("degenerate point is signalled") {
        Surface graph;
        graph.constraint = Expression::parse("z - x^4 - y^2");
        graph.box = {{-1, -1, -1}, {1, 1, 1}};
        CHECK_THROWS_AS(classify_critical_point(graph, {Expression::parse("z")}, {0, 0, 0}, 1), MorseAssumptionError);
    }
}

TEST_CASE("critical points of the catalog surfaces") {
    auto check_invariants = [](const SurfaceCase& c, const CriticalSearch& s) {
        for (const auto& p : s.points) {
            const Jet F = c.surface.constraint.jet(p.position), f = c.function.f.jet(p.position);
            CHECK(std::abs(F.value) <= 1e-10);
            double r = 0;
            for (std::size_t a = 0; a < 3; ++a) r += std::pow(f.gradient[a] - p.multiplier * F.gradient[a], 2);
            CHECK(std::sqrt(r) <= 1e-8);
            CHECK(p.neg_frame.size() + p.pos_frame.size() == 2);
            for (double mu : p.neg_eigenvalues) CHECK(mu < -1e-6);
            for (double mu : p.pos_eigenvalues) CHECK(mu > 1e-6);
            if (p.index == 2) {
                const auto& e1 = p.neg_frame[0];
                const auto& e2 = p.neg_frame[1];
                const Vec3 cross{e1[1] * e2[2] - e1[2] * e2[1], e1[2] * e2[0] - e1[0] * e2[2], e1[0] * e2[1] - e1[1] * e2[0]};
                CHECK(cross[0] * F.gradient[0] + cross[1] * F.gradient[1] + cross[2] * F.gradient[2] > 0);
            }
        }
        for (std::size_t i = 1; i < s.points.size(); ++i) CHECK(s.points[i - 1].value <= s.points[i].value);
    };
    SUBCASE("sphere") {
        const auto c = catalog_surface("sphere");
        const auto s = find_critical_points(c.surface, c.function);
        REQUIRE(s.points.size() == 2);
        CHECK(dist(s.points[0].position, {0, 0, -1}) <= 1e-6);
        CHECK(dist(s.points[1].position, {0, 0, 1}) <= 1e-6);
        CHECK(indices(s.points) == std::vector<int>{0, 2});
        check_invariants(c, s);
    }
    SUBCASE("torus") {
        const auto c = catalog_surface("torus");
        const auto s = find_critical_points(c.surface, c.function);
        REQUIRE(s.points.size() == 4);
        const double xs[] = {-3, -1, 1, 3};
        for (std::size_t i = 0; i < 4; ++i) CHECK(dist(s.points[i].position, {xs[i], 0, 0}) <= 1e-6);
        CHECK(indices(s.points) == std::vector<int>{0, 1, 1, 2});
        check_invariants(c, s);
    }
    SUBCASE("dented sphere") {
        const auto c = catalog_surface("dented_sphere");
        const auto s = find_critical_points(c.surface, c.function);
        REQUIRE(s.points.size() == 4);
        const double r = std::sqrt(3.0) / 2;
        CHECK(dist(s.points[0].position, {0, 0, -1}) <= 1e-6);
        CHECK(dist(s.points[1].position, {0, 0, 1}) <= 1e-6);
        CHECK(std::min(dist(s.points[2].position, {-r, 0, 1.25}), dist(s.points[2].position, {r, 0, 1.25})) <= 1e-6);
        CHECK(dist(s.points[2].position, s.points[3].position) > 1);
        CHECK(indices(s.points) == std::vector<int>{0, 1, 2, 2});
        check_invariants(c, s);
    }
    SUBCASE("genus 2") {
        const auto c = catalog_surface("genus2");
        const auto s = find_critical_points(c.surface, c.function);
        REQUIRE(s.points.size() == 6);
        const double phi = (1 + std::sqrt(5.0)) / 2, far = std::sqrt((3 + std::sqrt(13.0)) / 2);
        const double xs[] = {-far, -phi, -1 / phi, 1 / phi, phi, far};
        for (std::size_t i = 0; i < 6; ++i) CHECK(dist(s.points[i].position, {xs[i], 0, 0}) <= 1e-6);
        CHECK(indices(s.points) == std::vector<int>{0, 1, 1, 1, 1, 2});
        check_invariants(c, s);
    }
}

TEST_CASE("gradient flow") {
    const auto sphere = catalog_surface("sphere");
    const auto crits = find_critical_points(sphere.surface, sphere.function).points;
    const auto t = integrate_flow(sphere.surface, sphere.function, crits, {1, 0, 0}, {});
    REQUIRE(t.terminal);
    CHECK(*t.terminal == 0);
    CHECK(t.monotone);
    CHECK_FALSE(t.underflow);
    CHECK(t.max_constraint <= 1e-8);
    for (std::size_t i = 1; i < t.values.size(); ++i) CHECK(t.values[i] < t.values[i - 1]);
    CHECK(t.energy_defect() <= 1e-3);
    const auto up = integrate_flow(sphere.surface, sphere.function, crits, {0, 1, 0}, {}, FlowDirection::Up);
    REQUIRE(up.terminal);
    CHECK(*up.terminal == 1);

    SUBCASE("torus basins near the maximum") {
        const auto torus = catalog_surface("torus");
        const auto tc = find_critical_points(torus.surface, torus.function).points;
        // off the y = 0 plane: straight to the minimum along the outside
        const auto outside = integrate_flow(torus.surface, torus.function, tc, {2.95, 0.5, 0.05}, {});
        REQUIRE(outside.terminal);
        CHECK(*outside.terminal == 0);
        CHECK(outside.passages.empty());
        // in the y = 0 plane over the top of the tube: captured by the index-1 point (1, 0, 0)
        const auto over = integrate_flow(torus.surface, torus.function, tc, {2.99, 0, 0.1411}, {});
        REQUIRE_FALSE(over.passages.empty());
        CHECK(over.passages.front().point == 2);
        CHECK(over.passages.front().captured);
        CHECK(over.energy_defect() <= 1e-3);
        CHECK(over.max_constraint <= 1e-8);
    }
}

TEST_CASE("incidence on the catalog surfaces") {
    SUBCASE("sphere") {
        const auto& r = catalog_run("sphere");
        CHECK_FALSE(r.incidence.flagged());
        for (const auto& m : r.incidence.integral) CHECK(m.empty());
        CHECK(bettis(morse_homology(r.data)) == std::vector<std::size_t>{1, 0, 1});
        CHECK(bettis(morse_homology(r.data, Coefficients::modular(2))) == std::vector<std::size_t>{1, 0, 1});
    }
    SUBCASE("torus") {
        const auto& r = catalog_run("torus");
        CHECK_FALSE(r.incidence.flagged());
        for (const auto& m : r.incidence.integral) CHECK(m.is_zero());
        for (const auto& m : r.incidence.mod2) CHECK(m.is_zero());
        // two flow lines of opposite sign from the maximum into (1, 0, 0)
        bool seen = false;
        for (const auto& c : r.incidence.cells)
            if (c.from == 3 && c.to == 2) {
                seen = true;
                CHECK(c.lines == 2);
                CHECK(c.integral == 0);
                CHECK(c.upward_branches == std::optional<std::size_t>(2));
            }
        CHECK(seen);
        CHECK(bettis(morse_homology(r.data)) == std::vector<std::size_t>{1, 2, 1});
        CHECK(bettis(morse_homology(r.data, Coefficients::modular(2))) == std::vector<std::size_t>{1, 2, 1});
    }
    SUBCASE("dented sphere") {
        const auto& r = catalog_run("dented_sphere");
        CHECK_FALSE(r.incidence.flagged());
        const auto& d2 = r.incidence.integral[1];
        REQUIRE(d2.rows() == 1);
        REQUIRE(d2.cols() == 2);
        CHECK(abs(d2(0, 0)) == 1);
        CHECK(d2(0, 0) == -d2(0, 1));
        CHECK(r.incidence.mod2[1] == IntegerMatrix{{1, 1}});
        CHECK(rank(r.incidence.mod2[1].mod(2)) == 1);
        CHECK(verify_complex(build_morse_complex(r.data)).empty());
        CHECK(bettis(morse_homology(r.data)) == std::vector<std::size_t>{1, 0, 1});
        CHECK(bettis(morse_homology(r.data, Coefficients::modular(2))) == std::vector<std::size_t>{1, 0, 1});
    }
    SUBCASE("genus 2") {
        const auto& r = catalog_run("genus2");
        CHECK_FALSE(r.incidence.flagged());
        const auto h = morse_homology(r.data);
        // closed orientable connected surface with Euler characteristic -2
        const long chi = 1 - 4 + 1;
        CHECK(h[0].betti == 1);
        CHECK(h[2].betti == 1);
        CHECK(static_cast<long>(h[1].betti) == 2 - chi);
        for (const auto& g : h) CHECK(g.torsion.empty());
    }
}

TEST_CASE("morse homology against independent models") {
    SUBCASE("sphere against the hollow cube") {
        std::set<ElementaryCube> faces;
        for (const std::string& s : {"{0}x[0,1]x[0,1]", "{1}x[0,1]x[0,1]", "[0,1]x{0}x[0,1]", "[0,1]x{1}x[0,1]",
                                     "[0,1]x[0,1]x{0}", "[0,1]x[0,1]x{1}"})
            faces.insert(parse_cube(s));
        CHECK(morse_homology(catalog_run("sphere").data) == homology(build_complex(faces).complex));
    }
    SUBCASE("torus against a product of circles") {
        const auto circle = GradedFreeComplex::from_degree_zero({{"a", "b"}, {"e", "f"}}, {IntegerMatrix{{-1, 1}, {1, -1}}});
        const auto product = tensor(circle, circle);
        REQUIRE(verify_complex(product).empty());
        CHECK(morse_homology(catalog_run("torus").data) == homology(product));
    }
}

TEST_CASE("properties of numerical runs") {
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        const auto& r = catalog_run(name);
        // (d^f)^2 = 0 over Z and Z/2
        CHECK_NOTHROW(build_morse_complex(r.data));
        CHECK_NOTHROW(build_morse_complex(r.data, Coefficients::modular(2)));
        const auto h = morse_homology(r.data);
        long chi_crit = 0, chi_h = 0;
        for (int k = 0; k <= 2; ++k) {
            const auto m = r.data.of_index(k).size();
            CHECK(m >= h[static_cast<std::size_t>(k)].betti);
            chi_crit += (k % 2 ? -1 : 1) * static_cast<long>(m);
            chi_h += (k % 2 ? -1 : 1) * static_cast<long>(h[static_cast<std::size_t>(k)].betti);
        }
        CHECK(chi_crit == chi_h);
        for (const auto& t : r.incidence.flows) {
            CHECK(t.monotone);
            CHECK(t.max_constraint <= 1e-8);
            CHECK(t.energy_defect() <= 1e-3);
            for (std::size_t i = 1; i < t.values.size(); ++i) {
                bool restart = false;
                for (const auto& leg : t.legs) restart = restart || leg.first == i;
                if (!restart) CHECK(std::abs(t.values[i] - t.values[i - 1]) > 0);
            }
        }
    }
}

TEST_CASE("determinism and sign flip") {
    for (const std::string name : {"torus", "dented_sphere"}) {
        CAPTURE(name);
        const auto c = catalog_surface(name);
        const auto& a = catalog_run(name);
        const auto b = run_morse(c.surface, c.function);
        CHECK(a.incidence.integral == b.incidence.integral);
        CHECK(a.incidence.mod2 == b.incidence.mod2);
        CHECK(a.incidence.diagnostics == b.incidence.diagnostics);

        const auto flipped = run_morse(c.surface, {-c.function.f});
        CHECK_FALSE(flipped.incidence.flagged());
        REQUIRE(flipped.data.points.size() == a.data.points.size());
        // the same point set, traversed in the opposite order, with index k <-> 2 - k
        const std::size_t n = a.data.points.size();
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(dist(flipped.data.points[i].position, a.data.points[n - 1 - i].position) <= 1e-6);
            CHECK(flipped.data.points[i].index == 2 - a.data.points[n - 1 - i].index);
        }
        // generator order within an index reverses as well, so the mod-2 incidence is the
        // transpose with rows and columns reversed
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& m = a.incidence.mod2[k];
            const auto& fm = flipped.incidence.mod2[1 - k];
            REQUIRE(fm.rows() == m.cols());
            REQUIRE(fm.cols() == m.rows());
            for (std::size_t r = 0; r < m.rows(); ++r)
                for (std::size_t col = 0; col < m.cols(); ++col)
                    CHECK(fm(m.cols() - 1 - col, m.rows() - 1 - r) == m(r, col));
        }
        CHECK(morse_homology(flipped.data) == morse_homology(a.data));
    }
}

TEST_CASE("symbolic Morse data") {
    SUBCASE("projective plane over Z/2") {
        const auto d = symbolic_morse_data({symbolic("e0", 0, 0), symbolic("e1", 1, 1), symbolic("e2", 2, 2)},
                                           {IntegerMatrix{{0}}, IntegerMatrix{{2}}}, false);
        CHECK(bettis(morse_homology(d, Coefficients::modular(2))) == std::vector<std::size_t>{1, 1, 1});
        CHECK(build_morse_complex(d, Coefficients::modular(2)).modulus() == 2);
        CHECK_THROWS_AS(morse_homology(d), std::invalid_argument);
        const auto z = symbolic_morse_data({symbolic("e0", 0, 0), symbolic("e1", 1, 1), symbolic("e2", 2, 2)},
                                           {IntegerMatrix{{0}}, IntegerMatrix{{2}}}, true);
        const auto h = morse_homology(z);
        CHECK(h[0].betti == 1);
        CHECK(h[1].torsion == IntegerVector{2});
        CHECK(h[2].is_zero());
        CHECK(bettis(morse_homology(z, Coefficients::modular(2))) == std::vector<std::size_t>{1, 1, 1});
        CHECK(filtration_report(d, Coefficients::modular(2)).passes());
    }
    SUBCASE("defective incidence is rejected") {
        const auto d = symbolic_morse_data({symbolic("m", 0, 0), symbolic("s", 1, 1), symbolic("M", 2, 2)},
                                           {IntegerMatrix{{1}}, IntegerMatrix{{1}}}, true);
        CHECK_THROWS_AS(build_morse_complex(d), std::invalid_argument);
    }
    SUBCASE("malformed data") {
        CHECK_THROWS_AS(symbolic_morse_data({symbolic("a", 1, 0), symbolic("b", 0, 0)}, {IntegerMatrix(2, 0), IntegerMatrix(0, 0)}, true),
                        std::invalid_argument);
        CHECK_THROWS_AS(symbolic_morse_data({symbolic("a", 0, 0)}, {IntegerMatrix(1, 1), IntegerMatrix(1, 0)}, true),
                        std::invalid_argument);
        CHECK_THROWS_AS(symbolic_morse_data({symbolic("a", 0, 3)}, {IntegerMatrix(1, 0), IntegerMatrix(0, 0)}, true),
                        std::invalid_argument);
    }
}

TEST_CASE("filtration report") {
    for (const auto& name : catalog_names()) {
        CAPTURE(name);
        const auto& r = catalog_run(name);
        const auto rep = filtration_report(r.data);
        CHECK(rep.passes());
        CHECK(rep.reassembled == morse_homology(r.data));
        std::size_t seen = 0;
        for (const auto& lv : rep.levels) {
            CHECK(lv.les_checked);
            CHECK(lv.les.exact());
            std::vector<std::size_t> m(3, 0);
            for (auto i : lv.points) {
                CHECK(r.data.points[i].value == doctest::Approx(lv.value));
                ++m[static_cast<std::size_t>(r.data.points[i].index)];
            }
            seen += lv.points.size();
            CHECK(lv.counts == m);
            for (const auto& h : lv.relative) {
                CHECK(h.betti == m[static_cast<std::size_t>(h.degree)]);
                CHECK(h.torsion.empty());
            }
        }
        CHECK(seen == r.data.points.size());
        CHECK(filtration_report(r.data, Coefficients::modular(2)).passes());
    }
    SUBCASE("torus level x = -1") {
        const auto rep = filtration_report(catalog_run("torus").data);
        const auto& lv = rep.levels[1];
        CHECK(lv.value == doctest::Approx(-1));
        CHECK(bettis(lv.relative) == std::vector<std::size_t>{0, 1, 0});
    }
    SUBCASE("merged level with two index-1 points") {
        auto pts = catalog_run("genus2").data.points;
        pts[2].value = pts[1].value;  // -1/phi lowered onto -phi
        const auto d = symbolic_morse_data(pts, catalog_run("genus2").data.integral, true);
        const auto rep = filtration_report(d);
        REQUIRE(rep.levels.size() == 5);
        CHECK(rep.levels[1].counts == std::vector<std::size_t>{0, 2, 0});
        CHECK(bettis(rep.levels[1].relative) == std::vector<std::size_t>{0, 2, 0});
        CHECK(rep.passes());
    }
    SUBCASE("incidence that does not lower the value") {
        const auto d = symbolic_morse_data({symbolic("a", 0, 0), symbolic("b", 0, 1), symbolic("c", 1, 2)},
                                           {IntegerMatrix{{1}}, IntegerMatrix{{0}}}, true);
        CHECK_THROWS_AS(filtration_report(d), std::invalid_argument);
    }
}

TEST_CASE("flow dump format") {
    const auto& r = catalog_run("sphere");
    const auto text = dump_flows(r.incidence.flows);
    std::istringstream in(text);
    std::string line;
    std::size_t blanks = 0, rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            ++blanks;
            continue;
        }
        std::istringstream ls(line);
        double v[4];
        for (double& x : v) REQUIRE(static_cast<bool>(ls >> x));
        std::string rest;
        CHECK_FALSE(static_cast<bool>(ls >> rest));
        CHECK(v[3] == doctest::Approx(v[2]));  // f = z
        ++rows;
    }
    CHECK(blanks + 1 == r.incidence.flows.size());
    std::size_t total = 0;
    for (const auto& t : r.incidence.flows) total += t.points.size();
    CHECK(rows == total);
}
