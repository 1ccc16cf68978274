#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cornerhom/io.hpp"

namespace cornerhom {

/// Exit codes of the command-line tool.
enum ExitCode : int { exit_pass = 0, exit_check_failed = 1, exit_input_error = 2 };

/// Randomized cubical-calculus checks behind `cutcheck`.
struct CutcheckSummary {
    std::size_t square_trials = 0, square_failures = 0;
    std::size_t cut_trials = 0, cut_failures = 0;
    std::size_t crease_trials = 0, crease_failures = 0;
    std::size_t subdivision_trials = 0, subdivision_failures = 0;
    bool passes() const {
        return square_failures == 0 && cut_failures == 0 && crease_failures == 0 && subdivision_failures == 0;
    }
};

/// `trials` boundary-squared chains, `trials` cut and crease checks, and
/// max(1, trials / 10) subdivision checks, all from one seeded generator.
CutcheckSummary run_cutcheck(std::size_t trials, std::uint64_t seed);

/**
 * Runs one command (args excludes the program name), writing the report to
 * `out` and input errors to `err`. Returns an ExitCode.
 *
 *   homology FILE [--coeff z|q|zN]
 *   equivariant FILE --variant plus|laurent|minus --window LO..HI [--coeff ...]
 *   gysin FILE --window LO..HI
 *   localize FILE --window LO..HI
 *   uct FILE --mod M
 *   morse --surface NAME|FILE [--coeff z|z2] [--dump-flows PATH] [numerical flags]
 *   cutcheck [--trials N] [--seed S]
 *
 * Every command accepts --format text|machine|both (default both).
 */
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cornerhom
