#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "cornerhom/cli.hpp"
#include "support/random_complexes.hpp"

using namespace cornerhom;

namespace {

const std::string fixtures = CORNERHOM_FIXTURES;

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    const std::string path = std::string(CORNERHOM_BINARY_DIR) + "/" + name;
    std::ofstream(path) << text;
    return path;
}

Report machine(const Run& r) { return Report::from_machine(r.out); }

std::vector<std::size_t> bettis(const Report& r) {
    std::vector<std::size_t> b;
    for (const auto& h : r.homology) b.push_back(h.betti);
    return b;
}

}  // namespace

TEST_CASE("complex files") {
    SUBCASE("fixtures") {
        const auto pt = read_complex_file(fixtures + "/pt.cx");
        CHECK(pt.complex.top_degree() == 0);
        CHECK(pt.complex.rank(0) == 1);
        CHECK_FALSE(pt.circle);

        const auto s1 = read_complex_file(fixtures + "/s1_rot.cx");
        REQUIRE(s1.circle);
        CHECK(s1.circle->j(0) == IntegerMatrix{{1}});
        CHECK(s1.complex.boundary(1) == IntegerMatrix{{0}});

        const auto t = read_complex_file(fixtures + "/two_torsion.cx");
        CHECK(t.complex.boundary(1) == IntegerMatrix{{2}});
    }
    SUBCASE("undeclared label names its line") {
        try {
            parse_complex("dim 1\ngen 1: e\n# v is missing\nbnd e: +1*v\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
            CHECK(e.column() == 8);
            CHECK(std::string(e.what()).find("unknown label 'v'") != std::string::npos);
        }
    }
    SUBCASE("other input errors") {
        auto line_of = [](const std::string& text) -> std::size_t {
            try {
                parse_complex(text);
            } catch (const ParseError& e) {
                return e.line();
            }
            return 999;
        };
        CHECK(line_of("gen 0: a\n") == 1);                                    // dim missing
        CHECK(line_of("dim 1\ngen 0: a\ngen 1: e\nbnd e: +1*e\n") == 4);       // degree mismatch
        CHECK(line_of("dim 1\ngen 0: a\ngen 1: a\n") == 3);                    // duplicate label
        CHECK(line_of("dim 1\ngen 0: a\ngen 1: e\nbnd e: +x*a\n") == 4);       // bad coefficient
        CHECK(line_of("dim 1\ngen 0: a\nfoo\n") == 3);                         // unknown keyword
        CHECK(line_of("dim 0\ngen 1: a\n") == 2);                              // degree beyond dim
        CHECK(line_of("dim 1\ngen 0: a\ngen 1: e\nrot a: +1*e\nrot a: +1*e\n") == 5);
        // d d != 0 names the degree
        try {
            parse_complex("dim 2\ngen 0: v\ngen 1: e\ngen 2: f\nbnd e: +1*v\nbnd f: +1*e\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("degree 2") != std::string::npos);
        }
        // J J != 0
        CHECK_THROWS_AS(parse_complex("dim 2\ngen 0: a\ngen 1: b\ngen 2: c\nrot a: +1*b\nrot b: +1*c\n"), ParseError);
    }
    SUBCASE("term forms and big coefficients") {
        const auto f = parse_complex(
            "dim 1\ngen 0: a b\ngen 1: e\nbnd e: b -a +123456789012345678901234567890*a -123456789012345678901234567890*a\n");
        CHECK(f.complex.boundary(1) == IntegerMatrix{{-1}, {1}});
        const auto g = parse_complex("dim 1\ngen 0: a\ngen 1: e\nbnd e: +123456789012345678901234567890*a\n");
        CHECK(g.complex.boundary(1)(0, 0) == Integer("123456789012345678901234567890"));
        CHECK(parse_complex(emit_complex(g.complex)).complex == g.complex);
    }
    SUBCASE("round trip on random complexes") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 30; ++trial) {
            const auto x = testing_support::random_complex(rng, 1 + trial % 4, 4, 3);
            const auto back = parse_complex(emit_complex(x));
            CHECK(back.complex == x);
            CHECK_FALSE(back.circle);
        }
        for (int trial = 0; trial < 20; ++trial) {
            const auto c = testing_support::random_circle_complex(rng, 1 + trial % 3);
            const auto back = parse_complex(emit_complex(c.base, c.rotation));
            CHECK(back.complex == c.base);
            const bool nonzero = std::any_of(c.rotation.begin(), c.rotation.end(), [](const auto& m) { return !m.is_zero(); });
            REQUIRE(back.circle.has_value() == nonzero);
            if (nonzero)
                for (int k = 0; k <= c.base.top_degree(); ++k) CHECK(back.circle->j(k) == c.j(k));
        }
    }
}

TEST_CASE("surface files") {
    const auto t = read_surface_file(fixtures + "/torus.surf");
    CHECK(t.surface.constraint.value({3, 0, 0}) == doctest::Approx(0));
    CHECK(t.function.f.value({1, 2, 3}) == 1);
    CHECK(t.surface.box.hi[0] == 3.5);
    try {
        parse_surface("constraint x^2 + * y\nfunction z\nbox -1 1 -1 1 -1 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 18);
    }
    CHECK_THROWS_AS(parse_surface("constraint x\nfunction z\n"), ParseError);
    CHECK_THROWS_AS(parse_surface("constraint x\nfunction z\nbox 1 -1 -1 1 -1 1\n"), ParseError);
    CHECK_THROWS_AS(parse_surface("constraint (x^2+y^2+z^2-1)^2\nfunction z\nbox -1.5 1.5 -1.5 1.5 -1.5 1.5\n"),
                    MorseAssumptionError);
}

TEST_CASE("report machine block round-trips") {
    Report r;
    r.command = "demo";
    r.coefficients = "Z";
    r.homology = {{-2, 0, {}}, {0, 3, {Integer(2), Integer(6)}}, {1, 0, {Integer("1000000000000000000000")}}};
    r.check("a_check", true);
    r.check("b_check", false, "detail with = signs, a \\ backslash\nand a newline");
    r.field("key.with.dots", "value  with  spaces ");
    r.field("empty", "");
    r.diagnostics = {"first", "second = 2"};
    const auto back = Report::from_machine("noise before\n" + r.to_machine() + "noise after\n");
    CHECK(back == r);
    CHECK_FALSE(back.passes());
    CHECK_THROWS_AS(Report::from_machine("begin report\ncommand=x\n"), ParseError);
    CHECK_THROWS_AS(Report::from_machine("begin report\nbogus=1\nstatus=pass\nend report\n"), ParseError);
    CHECK_THROWS_AS(r.field("bad key", "v"), std::invalid_argument);
}

TEST_CASE("commands and exit codes") {
    SUBCASE("homology of a point") {
        const auto r = cli({"homology", fixtures + "/pt.cx"});
        CHECK(r.code == exit_pass);
        const auto m = machine(r);
        REQUIRE(m.homology.size() == 1);
        CHECK(m.homology[0].betti == 1);
        CHECK(m.homology[0].torsion.empty());
        CHECK(r.out.find("degree") < r.out.find("begin report"));
    }
    SUBCASE("homology over other rings") {
        const auto z = machine(cli({"homology", fixtures + "/two_torsion.cx"}));
        CHECK(z.homology[0].torsion == IntegerVector{2});
        CHECK(bettis(machine(cli({"homology", fixtures + "/two_torsion.cx", "--coeff", "z2"}))) ==
              std::vector<std::size_t>{1, 1});
        CHECK(bettis(machine(cli({"homology", fixtures + "/two_torsion.cx", "--coeff", "q"}))) ==
              std::vector<std::size_t>{0, 0});
    }
    SUBCASE("equivariant windows") {
        const auto lau = cli({"equivariant", fixtures + "/s1_rot.cx", "--variant", "laurent", "--window", "-6..2"});
        CHECK(lau.code == exit_pass);
        const auto m = machine(lau);
        CHECK(m.homology.size() == 9);
        for (const auto& h : m.homology) CHECK(h.is_zero());
        const auto plus = machine(cli({"equivariant", fixtures + "/s1_rot.cx", "--variant", "plus", "--window", "-6..2"}));
        for (const auto& h : plus.homology) CHECK(h.betti == (h.degree == 1 ? 1u : 0u));
        const auto minus = machine(cli({"equivariant", fixtures + "/s1_rot.cx", "--variant", "minus", "--window=-6..2"}));
        for (const auto& h : minus.homology) CHECK(h.betti == (h.degree == 0 ? 1u : 0u));
        const auto pt = machine(cli({"equivariant", fixtures + "/pt.cx", "--variant", "plus", "--window", "-6..2"}));
        for (const auto& h : pt.homology) CHECK(h.betti == (h.degree <= 0 && h.degree % 2 == 0 ? 1u : 0u));
    }
    SUBCASE("exact sequences and UCT") {
        for (const char* f : {"/pt.cx", "/s1_rot.cx", "/s1_cells.cx"}) {
            CHECK(cli({"gysin", fixtures + f, "--window", "-6..2"}).code == exit_pass);
            CHECK(cli({"localize", fixtures + f, "--window", "-6..2"}).code == exit_pass);
        }
        for (const char* m : {"2", "3", "4"}) CHECK(cli({"uct", fixtures + "/two_torsion.cx", "--mod", m}).code == exit_pass);
        const auto u = machine(cli({"uct", fixtures + "/two_torsion.cx", "--mod", "4"}));
        CHECK(bettis(u) == std::vector<std::size_t>{1, 1});
    }
    SUBCASE("cutcheck is deterministic") {
        const auto a = cli({"cutcheck", "--trials", "30", "--seed", "5"});
        const auto b = cli({"cutcheck", "--trials", "30", "--seed", "5"});
        CHECK(a.code == exit_pass);
        CHECK(a.out == b.out);
    }
    SUBCASE("input errors exit 2") {
        CHECK(cli({}).code == exit_input_error);
        CHECK(cli({"frobnicate"}).code == exit_input_error);
        CHECK(cli({"homology"}).code == exit_input_error);
        CHECK(cli({"homology", fixtures + "/missing.cx"}).code == exit_input_error);
        CHECK(cli({"homology", fixtures + "/pt.cx", "--coeff", "z1"}).code == exit_input_error);
        CHECK(cli({"equivariant", fixtures + "/pt.cx", "--variant", "sideways", "--window", "0..1"}).code ==
              exit_input_error);
        CHECK(cli({"equivariant", fixtures + "/pt.cx", "--variant", "plus", "--window", "3..1"}).code == exit_input_error);
        CHECK(cli({"gysin", fixtures + "/pt.cx", "--window", "a..b"}).code == exit_input_error);
        CHECK(cli({"uct", fixtures + "/pt.cx", "--mod", "1"}).code == exit_input_error);
        CHECK(cli({"morse", "--surface", "klein_bottle"}).code == exit_input_error);
        CHECK(cli({"morse", "--surface", "sphere", "--coeff", "z3"}).code == exit_input_error);
        const auto bad = temp_file("undeclared.cx", "dim 1\ngen 1: e\nbnd e: +1*v\n");
        const auto r = cli({"homology", bad});
        CHECK(r.code == exit_input_error);
        CHECK(r.err.find("line 3") != std::string::npos);
    }
    SUBCASE("help exits 0") { CHECK(cli({"--help"}).code == exit_pass); }
}

TEST_CASE("morse command") {
    SUBCASE("torus") {
        const auto r = cli({"morse", "--surface", "torus", "--format", "machine"});
        CHECK(r.code == exit_pass);
        const auto m = machine(r);
        CHECK(bettis(m) == std::vector<std::size_t>{1, 2, 1});
        CHECK(r.out.rfind("begin report", 0) == 0);
    }
    SUBCASE("surface file with flow dump") {
        const std::string dump = std::string(CORNERHOM_BINARY_DIR) + "/ellipsoid_flows.txt";
        std::remove(dump.c_str());
        const auto r = cli({"morse", "--surface", fixtures + "/ellipsoid.surf", "--coeff", "z2", "--dump-flows", dump});
        CHECK(r.code == exit_pass);
        CHECK(bettis(machine(r)) == std::vector<std::size_t>{1, 0, 1});
        std::ifstream in(dump);
        REQUIRE(in);
        std::string line;
        REQUIRE(std::getline(in, line));
        std::istringstream ls(line);
        double v[4];
        for (double& x : v) CHECK(static_cast<bool>(ls >> x));
    }
    SUBCASE("degenerate critical point exits 1") {
        // f = z^2 on the sphere is critical along the whole equator
        const auto path = temp_file("degenerate.surf", "constraint x^2 + y^2 + z^2 - 1\nfunction z^2\nbox -1.5 1.5 -1.5 1.5 -1.5 1.5\n");
        const auto r = cli({"morse", "--surface", path});
        CHECK(r.code == exit_check_failed);
        CHECK_FALSE(machine(r).passes());
    }
    SUBCASE("irregular constraint exits 1") {
        const auto path =
            temp_file("irregular.surf", "constraint (x^2 + y^2 + z^2 - 1)^2\nfunction z\nbox -1.5 1.5 -1.5 1.5 -1.5 1.5\n");
        CHECK(cli({"morse", "--surface", path}).code == exit_check_failed);
    }
}
