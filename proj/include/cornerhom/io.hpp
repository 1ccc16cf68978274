#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cornerhom/complex.hpp"
#include "cornerhom/equivariant.hpp"
#include "cornerhom/homology.hpp"
#include "cornerhom/morse.hpp"

namespace cornerhom {

/// Input error with a 1-based line and column (column 0 when it concerns the whole file).
class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

/**
 * Complex file:
 *
 *   # comment
 *   dim 1
 *   gen 0: p q
 *   gen 1: e
 *   bnd e: +1*q -1*p
 *   rot p: +1*e
 *
 * Degrees run 0..dim. Labels are unique across degrees and declared before use;
 * a bnd line lists the boundary of one generator, a rot line its image under J.
 * Coefficients are arbitrary-precision integers; "+label" means "+1*label".
 */
struct ComplexFile {
    GradedFreeComplex complex;
    std::optional<CircleComplex> circle;  // present iff the file has rot lines

    /// The circle complex, with trivial action when no rot lines were given.
    CircleComplex circle_or_trivial() const;
};

/// Throws ParseError on syntax errors, unknown labels, degree mismatches, and
/// failures of verify_complex / verify_circle_complex (naming the degree).
ComplexFile parse_complex(const std::string& text);
ComplexFile read_complex_file(const std::string& path);

/// Canonical text; parse_complex(emit_complex(x)) reproduces x. Needs bottom degree 0 and modulus 0.
std::string emit_complex(const GradedFreeComplex& x, const std::vector<IntegerMatrix>& rotation = {});

/**
 * Surface file:
 *
 *   constraint (sqrt(x^2 + y^2) - 2)^2 + z^2 - 1
 *   function x
 *   box -3.5 3.5 -3.5 3.5 -1.5 1.5
 *
 * Throws ParseError (expression errors carry the column within the line), and
 * MorseAssumptionError when the constraint is not regular on the sampled box.
 */
SurfaceCase parse_surface(const std::string& text, const std::string& name = "custom");
SurfaceCase read_surface_file(const std::string& path);

struct ReportCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    friend bool operator==(const ReportCheck&, const ReportCheck&) = default;
};

/// Result of one command: homology table, check verdicts, free-form fields and diagnostics.
struct Report {
    std::string command;
    std::string coefficients;
    std::vector<HomologyGroup> homology;
    std::vector<ReportCheck> checks;
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<std::string> diagnostics;

    bool passes() const;
    void check(const std::string& name, bool passed, const std::string& detail = "");
    void field(const std::string& key, const std::string& value);

    /// Aligned human-readable text.
    std::string to_text() const;
    /// "key=value" lines between "begin report" and "end report".
    std::string to_machine() const;
    /// Inverse of to_machine; text outside the block is ignored. Throws ParseError.
    static Report from_machine(const std::string& text);

    friend bool operator==(const Report&, const Report&) = default;
};

}  // namespace cornerhom
