#pragma once

#include <string>
#include <vector>

#include "cornerhom/complex.hpp"
#include "cornerhom/homology.hpp"

namespace cornerhom {

/// Chain-level map; matrices[k - source.bottom_degree()] sends C_k(source) to
/// C_{k + degree_shift}(target).
struct ChainMap {
    GradedFreeComplex source;
    GradedFreeComplex target;
    int degree_shift = 0;
    std::vector<IntegerMatrix> matrices;

    /// Matrix in source degree k; zero (correctly shaped) outside the source window.
    IntegerMatrix matrix(int degree) const;
};

/// Degrees where target D o f != f o source D (degree_shift 0 only).
std::vector<int> verify_chain_map(const ChainMap& f);

/// 0 -> A --i--> B --p--> C -> 0.
struct ShortExactSequence {
    ChainMap inclusion;
    ChainMap projection;

    const GradedFreeComplex& a() const { return inclusion.source; }
    const GradedFreeComplex& b() const { return inclusion.target; }
    const GradedFreeComplex& c() const { return projection.target; }
};

/// Human-readable list of violated invariants (chain maps, injectivity,
/// surjectivity, image == kernel in every degree). Empty means valid.
std::vector<std::string> verify_short_exact(const ShortExactSequence& s);

/// Matrix of the connecting map H_k(C) -> H_{k-1}(A) on homology coordinates
/// (HomologyPresentation of C in degree k and of A in degree k-1).
/// Throws std::logic_error if a lift fails, which cannot happen for a valid sequence.
IntegerMatrix connecting_homomorphism(const ShortExactSequence& s, int degree);

/// Class in H_{k-1}(A) obtained from one particular lift b in B_k of a C-cycle:
/// the homology coordinates of i^{-1}(D b).
IntegerVector connecting_class_of_lift(const ShortExactSequence& s, int degree, const IntegerVector& lift);

/// Exactness of F then G at the middle group, where the groups are presented by
/// generator orders (0 = free): im F == ker G as subgroups.
bool is_exact_at(const IntegerMatrix& f, const IntegerVector& middle_orders, const IntegerMatrix& g,
                 const IntegerVector& target_orders);

struct ExactnessJoint {
    enum class Position { A, B, C };
    int degree = 0;
    Position position = Position::A;
    bool exact = false;
    std::string describe() const;
};

struct LongExactSequenceReport {
    int lo = 0, hi = 0;
    std::vector<ExactnessJoint> joints;
    /// homology of A, B, C in degrees [lo, hi]
    std::vector<HomologyGroup> homology_a, homology_b, homology_c;
    /// induced maps per degree (index k - lo); connecting[k - lo] is H_k(C) -> H_{k-1}(A)
    std::vector<IntegerMatrix> induced_inclusion, induced_projection, connecting;

    bool exact() const;
};

LongExactSequenceReport long_exact_sequence_check(const ShortExactSequence& s);

}  // namespace cornerhom
