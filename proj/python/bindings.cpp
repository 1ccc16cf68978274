#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cornerhom/cli.hpp"
#include "cornerhom/equivariant.hpp"
#include "cornerhom/io.hpp"
#include "cornerhom/morse.hpp"
#include "cornerhom/smith.hpp"

namespace py = pybind11;
using namespace cornerhom;

namespace {

py::int_ to_py(const Integer& v) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(v.get_str().c_str(), nullptr, 10));
}

Integer from_py(const py::handle& h) { return Integer(py::str(h).cast<std::string>()); }

py::list matrix_to_py(const IntegerMatrix& m) {
    py::list rows;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        py::list row;
        for (std::size_t c = 0; c < m.cols(); ++c) row.append(to_py(m(r, c)));
        rows.append(row);
    }
    return rows;
}

IntegerMatrix matrix_from_py(const py::sequence& rows) {
    const std::size_t n = rows.size();
    const std::size_t m = n ? py::len(rows[0]) : 0;
    IntegerMatrix out(n, m);
    for (std::size_t r = 0; r < n; ++r) {
        const py::sequence row = rows[r];
        if (row.size() != m) throw std::invalid_argument("ragged matrix");
        for (std::size_t c = 0; c < m; ++c) out(r, c) = from_py(row[c]);
    }
    return out;
}

py::list groups_to_py(const std::vector<HomologyGroup>& hs) {
    py::list out;
    for (const auto& h : hs) {
        py::list torsion;
        for (const auto& t : h.torsion) torsion.append(to_py(t));
        py::dict d;
        d["degree"] = h.degree;
        d["betti"] = h.betti;
        d["torsion"] = torsion;
        out.append(d);
    }
    return out;
}

py::dict report_to_py(const Report& r) {
    py::dict d;
    d["command"] = r.command;
    d["coefficients"] = r.coefficients;
    d["homology"] = groups_to_py(r.homology);
    py::list checks;
    for (const auto& c : r.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
    d["checks"] = checks;
    d["fields"] = r.fields;
    d["diagnostics"] = r.diagnostics;
    d["passed"] = r.passes();
    return d;
}

}  // namespace

PYBIND11_MODULE(_cornerhom, m) {
    m.doc() = "Bindings for the cornerhom C++ library";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<MorseAssumptionError>(m, "MorseAssumptionError", PyExc_RuntimeError);

    m.def(
        "homology",
        [](const std::string& text, const std::string& coeff) {
            return groups_to_py(homology(parse_complex(text).complex, Coefficients::parse(coeff)));
        },
        py::arg("complex_text"), py::arg("coeff") = "z", "Homology of a complex given in the .cx text format.");

    m.def(
        "equivariant_homology",
        [](const std::string& text, const std::string& variant, int lo, int hi, const std::string& coeff) {
            const auto x = parse_complex(text).circle_or_trivial();
            return groups_to_py(equivariant_homology(x, parse_variant(variant), lo, hi, Coefficients::parse(coeff)));
        },
        py::arg("complex_text"), py::arg("variant"), py::arg("lo"), py::arg("hi"), py::arg("coeff") = "z");

    m.def(
        "normalize_complex",
        [](const std::string& text) {
            const auto f = parse_complex(text);
            return emit_complex(f.complex, f.circle ? f.circle->rotation : std::vector<IntegerMatrix>{});
        },
        py::arg("complex_text"), "Canonical .cx text of a parsed complex.");

    m.def(
        "smith_normal_form",
        [](const py::sequence& rows) {
            const auto s = smith_normal_form(matrix_from_py(rows));
            py::list factors;
            for (const auto& v : s.invariant_factors()) factors.append(to_py(v));
            py::dict d;
            d["U"] = matrix_to_py(s.left);
            d["D"] = matrix_to_py(s.diagonal);
            d["V"] = matrix_to_py(s.right);
            d["invariant_factors"] = factors;
            return d;
        },
        py::arg("matrix"), "U, D, V with U A V = D.");

    m.def(
        "morse",
        [](const std::string& surface, const std::string& coeff) {
            std::ostringstream out, err;
            const int code = run_cli({"morse", "--surface", surface, "--coeff", coeff, "--format", "machine"}, out, err);
            if (code == exit_input_error) throw std::invalid_argument(err.str());
            return report_to_py(Report::from_machine(out.str()));
        },
        py::arg("surface"), py::arg("coeff") = "z", "Numerical Morse report for a catalog name or surface file.");

    m.def(
        "catalog_surfaces", [] { return catalog_names(); }, "Names of the built-in surfaces.");

    m.def(
        "parse_report", [](const std::string& text) { return report_to_py(Report::from_machine(text)); },
        py::arg("text"), "Parse a machine-readable report block.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = run_cli(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run one command; returns (exit code, stdout, stderr).");
}
