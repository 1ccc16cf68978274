#include "cornerhom/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "cornerhom/cubical.hpp"
#include "cornerhom/equivariant.hpp"
#include "cornerhom/sampling.hpp"
#include "cornerhom/universal_coefficients.hpp"

namespace cornerhom {

CutcheckSummary run_cutcheck(std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CutcheckSummary s;
    for (std::size_t t = 0; t < trials; ++t) {
        const int k = 2 + static_cast<int>(t % 3);
        const std::size_t n = static_cast<std::size_t>(k) + t % 2;
        const auto c = sampling::random_chain(rng, k, n, 1 + static_cast<int>(t % 4), true);
        ++s.square_trials;
        if (!cube_boundary(cube_boundary(normalize_chain(c))).is_zero()) ++s.square_failures;
    }
    for (std::size_t t = 0; t < trials; ++t) {
        const int k = 1 + static_cast<int>(t % 3);
        const std::size_t n = static_cast<std::size_t>(k) + 1;
        const auto c = sampling::random_chain(rng, k, n, 3, true);
        const std::size_t axis = t % n;
        const Dyadic level = sampling::generic_level(rng, c, axis);
        ++s.cut_trials;
        if (!cut_identity_holds(c, axis, level)) ++s.cut_failures;
        ++s.crease_trials;
        if (!crease_identity_holds(c, axis, level)) ++s.crease_failures;
    }
    const std::size_t sets = std::max<std::size_t>(1, trials / 10);
    for (std::size_t t = 0; t < sets; ++t) {
        const std::size_t n = 2 + t % 2;
        const auto cubes = sampling::random_cubical_set(rng, n, 6);
        const auto coarse = build_complex(cubes);
        const std::size_t axis = t % n;
        const Dyadic level = sampling::generic_level(rng, face_closure(cubes), axis);
        const auto fine = build_complex(subdivide(cubes, axis, level));
        ++s.subdivision_trials;
        if (homology(coarse.complex) != homology(fine.complex) ||
            !verify_chain_map(subdivision_map(coarse, fine, axis, level)).empty())
            ++s.subdivision_failures;
    }
    return s;
}

namespace {

std::pair<int, int> parse_window(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) throw std::invalid_argument("window must look like LO..HI, got '" + text + "'");
    try {
        std::size_t a = 0, b = 0;
        const std::string l = text.substr(0, dots), h = text.substr(dots + 2);
        const int lo = std::stoi(l, &a), hi = std::stoi(h, &b);
        if (a != l.size() || b != h.size()) throw std::invalid_argument("");
        if (lo > hi) throw std::invalid_argument("window " + text + " is empty");
        return {lo, hi};
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("window bound out of range in '" + text + "'");
    } catch (const std::invalid_argument& e) {
        if (std::string(e.what()).empty() || std::string(e.what()) == "stoi")
            throw std::invalid_argument("window must look like LO..HI, got '" + text + "'");
        throw;
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string matrix_text(const IntegerMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0) return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
    std::string s;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        s += r ? "; " : "";
        for (std::size_t c = 0; c < m.cols(); ++c) s += (c ? " " : "") + m(r, c).get_str();
    }
    return "[" + s + "]";
}

void add_joint_diagnostics(Report& r, const LongExactSequenceReport& les) {
    std::size_t bad = 0;
    for (const auto& j : les.joints)
        if (!j.exact) {
            ++bad;
            r.diagnostics.push_back(j.describe());
        }
    r.field("joints", std::to_string(les.joints.size()));
    r.field("inexact_joints", std::to_string(bad));
}

Report homology_command(const std::string& file, const std::string& coeff) {
    const auto cf = read_complex_file(file);
    const auto c = Coefficients::parse(coeff);
    Report r;
    r.command = "homology";
    r.coefficients = c.to_string();
    r.homology = homology(cf.complex, c);
    r.field("file", file);
    r.field("dimension", std::to_string(cf.complex.top_degree()));
    std::string ranks;
    for (int k = 0; k <= cf.complex.top_degree(); ++k) ranks += (k ? " " : "") + std::to_string(cf.complex.rank(k));
    r.field("ranks", ranks);
    r.check("boundary_squared_zero", verify_complex(cf.complex).empty());
    if (cf.circle) r.check("circle_action", verify_circle_complex(*cf.circle).empty());
    return r;
}

Report equivariant_command(const std::string& file, const std::string& variant, const std::string& window,
                           const std::string& coeff) {
    const auto x = read_complex_file(file).circle_or_trivial();
    const Variant v = parse_variant(variant);
    const auto [lo, hi] = parse_window(window);
    const auto c = Coefficients::parse(coeff);
    Report r;
    r.command = "equivariant";
    r.coefficients = c.to_string();
    r.homology = equivariant_homology(x, v, lo, hi, c);
    r.field("file", file);
    r.field("variant", to_string(v));
    r.field("window", std::to_string(lo) + ".." + std::to_string(hi));
    r.check("circle_action", verify_circle_complex(x).empty());
    r.check("boundary_squared_zero", verify_complex(build_variant(x, v, lo, hi).complex).empty());
    return r;
}

Report gysin_command(const std::string& file, const std::string& window) {
    const auto x = read_complex_file(file).circle_or_trivial();
    const auto [lo, hi] = parse_window(window);
    const auto g = gysin_check(x, lo, hi);
    Report r;
    r.command = "gysin";
    r.coefficients = Coefficients::integers().to_string();
    r.homology = equivariant_homology(x, Variant::Plus, lo, hi);
    r.field("file", file);
    r.field("window", std::to_string(lo) + ".." + std::to_string(hi));
    r.field("sequence", "0 -> C+[2] -u-> C+ -> C -> 0");
    for (const auto& s : g.sequence_issues) r.diagnostics.push_back(s);
    add_joint_diagnostics(r, g.les);
    r.check("short_exact", g.sequence_issues.empty());
    r.check("long_exact", g.les.exact());
    return r;
}

Report localize_command(const std::string& file, const std::string& window) {
    const auto x = read_complex_file(file).circle_or_trivial();
    const auto [lo, hi] = parse_window(window);
    const auto l = localization_check(x, lo, hi);
    Report r;
    r.command = "localize";
    r.coefficients = Coefficients::integers().to_string();
    r.homology = equivariant_homology(x, Variant::Laurent, lo, hi);
    r.field("file", file);
    r.field("window", std::to_string(lo) + ".." + std::to_string(hi));
    r.field("sequence", "0 -> C+[2] -u-> Cinf -> C- -> 0");
    for (const auto& s : l.sequence_issues) r.diagnostics.push_back(s);
    add_joint_diagnostics(r, l.les);
    bool stable = true;
    for (const auto& s : l.stabilization) {
        r.field("stable." + std::to_string(s.degree),
                "Hinf=" + s.laurent.to_string() + " H+_" + std::to_string(s.stable_degree) + "=" + s.plus.to_string());
        stable = stable && s.equal;
    }
    r.check("short_exact", l.sequence_issues.empty());
    r.check("long_exact", l.les.exact());
    r.check("stabilization", stable);
    return r;
}

Report uct_command(const std::string& file, int m) {
    const auto cf = read_complex_file(file);
    const auto u = universal_coefficients_check(cf.complex, m);
    Report r;
    r.command = "uct";
    r.coefficients = Coefficients::modular(m).to_string();
    r.homology = homology(cf.complex, Coefficients::modular(m));
    r.field("file", file);
    bool ranks = true, iso = true;
    for (const auto& d : u.degrees) {
        r.field("rank." + std::to_string(d.degree), std::to_string(d.mod_rank) + " = " + std::to_string(d.tensor_rank) +
                                                        " + " + std::to_string(d.tor_rank));
        ranks = ranks && d.rank_identity;
        iso = iso && d.isomorphic;
        if (!d.rank_identity) r.diagnostics.push_back("rank identity fails in degree " + std::to_string(d.degree));
        if (!d.isomorphic) r.diagnostics.push_back("invariant factors disagree in degree " + std::to_string(d.degree));
    }
    r.check("rank_identity", ranks);
    r.check("invariant_factors", iso);
    return r;
}

struct MorseFlags {
    std::string surface;
    std::string coeff = "z";
    std::string dump;
    MorseParameters params;
};

SurfaceCase load_surface(const std::string& spec) {
    const auto names = catalog_names();
    if (std::find(names.begin(), names.end(), spec) != names.end()) return catalog_surface(spec);
    if (!std::filesystem::exists(spec)) {
        std::string known;
        for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
        throw std::invalid_argument("'" + spec + "' is neither a catalog surface (" + known + ") nor a file");
    }
    return read_surface_file(spec);
}

Report morse_command(const MorseFlags& flags) {
    const auto c = Coefficients::parse(flags.coeff);
    if (!(c.kind == Coefficients::Kind::Integers || (c.kind == Coefficients::Kind::Modular && c.modulus == 2)))
        throw std::invalid_argument("morse supports --coeff z or z2");
    const SurfaceCase sc = load_surface(flags.surface);
    Report r;
    r.command = "morse";
    r.coefficients = c.to_string();
    r.field("surface", sc.surface.name);
    r.field("constraint", sc.surface.constraint.to_string());
    r.field("function", sc.function.f.to_string());

    const MorseRun run = run_morse(sc.surface, sc.function, flags.params);
    r.field("seeds", std::to_string(run.search.seeds));
    r.field("nonconvergent_seeds", std::to_string(run.search.nonconvergent));
    std::vector<std::size_t> counts(3, 0);
    for (const auto& p : run.data.points) {
        ++counts[static_cast<std::size_t>(p.index)];
        r.field("critical." + p.label, fmt(p.position[0]) + " " + fmt(p.position[1]) + " " + fmt(p.position[2]) +
                                           " value=" + fmt(p.value) + " index=" + std::to_string(p.index));
    }
    r.field("index_counts", std::to_string(counts[0]) + " " + std::to_string(counts[1]) + " " + std::to_string(counts[2]));
    const bool z2 = c.kind == Coefficients::Kind::Modular;
    for (std::size_t k = 0; k < run.data.integral.size(); ++k)
        r.field("incidence." + std::to_string(k + 1), matrix_text(z2 ? run.data.mod2[k] : run.data.integral[k]));
    for (const auto& cell : run.incidence.cells)
        if (cell.flagged || !cell.note.empty())
            r.diagnostics.push_back(run.data.points[cell.from].label + " -> " + run.data.points[cell.to].label + ": " +
                                    (cell.note.empty() ? "flagged" : cell.note));
    for (const auto& d : run.incidence.diagnostics) r.diagnostics.push_back(d);

    r.check("incidence_resolved", !run.incidence.flagged());
    bool dd = true;
    try {
        build_morse_complex(run.data, c);
    } catch (const std::invalid_argument& e) {
        dd = false;
        r.diagnostics.push_back(e.what());
    }
    r.check("boundary_squared_zero", dd);
    bool flows_ok = true;
    double worst = 0;
    for (const auto& t : run.incidence.flows) {
        worst = std::max(worst, t.energy_defect());
        flows_ok = flows_ok && t.monotone && !t.underflow && t.max_constraint <= 1e-8 && t.energy_defect() <= 1e-3;
    }
    r.check("trajectories", flows_ok, std::to_string(run.incidence.flows.size()) + " flows, worst energy defect " + fmt(worst));
    if (dd) {
        r.homology = morse_homology(run.data, c);
        bool inequalities = true;
        long chi_c = 0, chi_h = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            const std::size_t b = k < r.homology.size() ? r.homology[k].betti : 0;
            inequalities = inequalities && counts[k] >= b;
            chi_c += (k % 2 ? -1 : 1) * static_cast<long>(counts[k]);
            chi_h += (k % 2 ? -1 : 1) * static_cast<long>(b);
        }
        r.check("morse_inequalities", inequalities);
        r.check("euler_characteristic", chi_c == chi_h, std::to_string(chi_c));
        try {
            const auto f = filtration_report(run.data, c);
            r.check("filtration", f.passes(), std::to_string(f.levels.size()) + " levels");
        } catch (const std::invalid_argument& e) {
            r.check("filtration", false, e.what());
        }
    }
    if (!flags.dump.empty()) {
        std::ofstream out(flags.dump);
        if (!out) throw std::invalid_argument("cannot write " + flags.dump);
        out << dump_flows(run.incidence.flows);
        r.field("flow_dump", flags.dump);
    }
    return r;
}

Report cutcheck_command(std::size_t trials, std::uint64_t seed) {
    const auto s = run_cutcheck(trials, seed);
    Report r;
    r.command = "cutcheck";
    r.field("trials", std::to_string(trials));
    r.field("seed", std::to_string(seed));
    auto ratio = [](std::size_t fail, std::size_t total) {
        return std::to_string(total - fail) + "/" + std::to_string(total) + " hold";
    };
    r.check("boundary_squared_zero", s.square_failures == 0, ratio(s.square_failures, s.square_trials));
    r.check("cut_identity", s.cut_failures == 0, ratio(s.cut_failures, s.cut_trials));
    r.check("crease_identity", s.crease_failures == 0, ratio(s.crease_failures, s.crease_trials));
    r.check("subdivision_invariance", s.subdivision_failures == 0, ratio(s.subdivision_failures, s.subdivision_trials));
    return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact chain-level homology, S1-equivariant complexes and numerical Morse complexes."};
    app.name("cornerhom");
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "both";
    app.add_option("--format", format, "text, machine or both")
        ->check(CLI::IsMember({"text", "machine", "both"}))
        ->capture_default_str();

    std::string file, coeff = "z", variant, window;
    int modulus = 0;
    auto* hom = app.add_subcommand("homology", "homology of a complex file");
    hom->add_option("file", file, "complex file")->required();
    hom->add_option("--coeff", coeff, "z, q or zN")->capture_default_str();

    auto* eq = app.add_subcommand("equivariant", "S1-equivariant homology on a degree window");
    eq->add_option("file", file, "complex file (rot lines give J)")->required();
    eq->add_option("--variant", variant, "plus, laurent or minus")->required();
    eq->add_option("--window", window, "LO..HI")->required();
    eq->add_option("--coeff", coeff, "z, q or zN")->capture_default_str();

    auto* gy = app.add_subcommand("gysin", "exactness of the Gysin sequence");
    gy->add_option("file", file, "complex file")->required();
    gy->add_option("--window", window, "LO..HI")->required();

    auto* lc = app.add_subcommand("localize", "exactness of the localization sequence");
    lc->add_option("file", file, "complex file")->required();
    lc->add_option("--window", window, "LO..HI")->required();

    auto* uc = app.add_subcommand("uct", "universal coefficient check");
    uc->add_option("file", file, "complex file")->required();
    uc->add_option("--mod", modulus, "modulus m >= 2")->required();

    MorseFlags mf;
    auto* mo = app.add_subcommand("morse", "numerical Morse complex of a surface");
    mo->add_option("--surface", mf.surface, "catalog name or surface file")->required();
    mo->add_option("--coeff", mf.coeff, "z or z2")->capture_default_str();
    mo->add_option("--dump-flows", mf.dump, "write trajectories as 'x y z f' lines");
    mo->add_option("--grid", mf.params.grid, "seeds per box axis")->capture_default_str();
    mo->add_option("--r-cap", mf.params.r_cap, "capture radius")->capture_default_str();
    mo->add_option("--r-seed", mf.params.r_seed, "unstable-sphere radius")->capture_default_str();
    mo->add_option("--passage-radius", mf.params.passage_radius)->capture_default_str();
    mo->add_option("--circle-seeds", mf.params.circle_seeds)->capture_default_str();
    mo->add_option("--bisection-tol", mf.params.bisection_tolerance)->capture_default_str();
    mo->add_option("--margin", mf.params.margin, "nondegeneracy margin")->capture_default_str();
    mo->add_option("--tolerance", mf.params.tolerance, "integrator tolerance")->capture_default_str();

    std::size_t trials = 100;
    std::uint64_t seed = 20240611;
    auto* cc = app.add_subcommand("cutcheck", "randomized cut/crease identities");
    cc->add_option("--trials", trials)->capture_default_str();
    cc->add_option("--seed", seed)->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    }

    Report report;
    try {
        if (hom->parsed()) report = homology_command(file, coeff);
        else if (eq->parsed()) report = equivariant_command(file, variant, window, coeff);
        else if (gy->parsed()) report = gysin_command(file, window);
        else if (lc->parsed()) report = localize_command(file, window);
        else if (uc->parsed()) report = uct_command(file, modulus);
        else if (mo->parsed()) report = morse_command(mf);
        else report = cutcheck_command(trials, seed);
    } catch (const MorseAssumptionError& e) {
        report = Report{};
        report.command = "morse";
        report.check("morse_assumptions", false, e.what());
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_check_failed;
    }
    if (format != "machine") out << report.to_text();
    if (format == "both") out << '\n';
    if (format != "text") out << report.to_machine();
    return report.passes() ? exit_pass : exit_check_failed;
}

}  // namespace cornerhom
