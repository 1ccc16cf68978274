#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cornerhom/complex.hpp"
#include "cornerhom/exact_sequence.hpp"
#include "cornerhom/homology.hpp"

namespace cornerhom {

/// A complex with an operator J of degree +1; rotation[k - bottom] is J : C_k -> C_{k+1}.
struct CircleComplex {
    GradedFreeComplex base;
    std::vector<IntegerMatrix> rotation;

    /// Trivial action (J = 0).
    static CircleComplex trivial(GradedFreeComplex base);
    /// J_k, zero (correctly shaped) when absent.
    IntegerMatrix j(int degree) const;
};

/// Violations of J D + D J = 0 and J J = 0 (and shape errors); empty means pass.
std::vector<std::string> verify_circle_complex(const CircleComplex& x);

enum class Variant { Plus, Laurent, Minus };
std::string to_string(Variant v);
/// "plus", "laurent", "minus"; throws std::invalid_argument otherwise.
Variant parse_variant(const std::string& text);

struct EquivariantGenerator {
    int base_degree = 0;
    std::size_t base_index = 0;
    int power = 0;  // exponent of u
    friend bool operator==(const EquivariantGenerator&, const EquivariantGenerator&) = default;
};

/**
 * C_*(M) (x) Z[u] (plus), Z[u, u^-1] (laurent) or the quotient by u C (x) Z[u]
 * (minus), truncated to the degree window [lo, hi]. The generator g u^k sits
 * in degree deg g - 2k and d(g u^k) = (Dg) u^k + (Jg) u^{k+1}.
 */
struct EquivariantComplex {
    Variant variant = Variant::Plus;
    int lo = 0, hi = 0;
    GradedFreeComplex complex;
    std::vector<std::vector<EquivariantGenerator>> generators;  // index d - lo

    const std::vector<EquivariantGenerator>& in_degree(int d) const;
};

/// Whether the variant admits u-power k.
bool power_allowed(Variant v, int k);

/// Throws std::invalid_argument for an unverified X or an empty window (lo > hi).
EquivariantComplex build_variant(const CircleComplex& x, Variant v, int lo, int hi);

/// Homology in degrees [lo, hi], computed on the window padded by 2 on each side.
std::vector<HomologyGroup> equivariant_homology(const CircleComplex& x, Variant v, int lo, int hi,
                                                Coefficients coeff = Coefficients::integers());

/// 0 -> C+_{*+2} --u--> C+_* --> C_* -> 0 on the padded window.
ShortExactSequence gysin_sequence(const CircleComplex& x, int lo, int hi);
/// 0 -> C+_{*+2} --u--> C^inf_* --> C-_* -> 0 on the padded window.
ShortExactSequence localization_sequence(const CircleComplex& x, int lo, int hi);

struct GysinReport {
    std::vector<std::string> sequence_issues;
    LongExactSequenceReport les;
    bool passes() const { return sequence_issues.empty() && les.exact(); }
};

struct StabilizationCheck {
    int degree = 0;         // d
    int stable_degree = 0;  // d' = d mod 2, d' <= bottom - 1
    HomologyGroup laurent, plus;
    bool equal = false;
};

struct LocalizationReport {
    std::vector<std::string> sequence_issues;
    LongExactSequenceReport les;
    std::vector<StabilizationCheck> stabilization;
    bool passes() const;
};

GysinReport gysin_check(const CircleComplex& x, int lo, int hi);
LocalizationReport localization_check(const CircleComplex& x, int lo, int hi);

}  // namespace cornerhom
