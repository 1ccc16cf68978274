#pragma once

#include <optional>

#include "cornerhom/integer_matrix.hpp"

namespace cornerhom {

/**
 * Result of diagonalizing an integer matrix by unimodular row and column
 * operations: left * source * right == diagonal.
 *
 * The diagonal entries d_1, ..., d_r are positive and each divides the next;
 * all remaining diagonal entries are zero. left_inverse is the exact inverse
 * of left and is carried along because homology presentations need it.
 */
struct SmithDecomposition {
    IntegerMatrix left;          // U, rows x rows
    IntegerMatrix diagonal;      // D, rows x cols
    IntegerMatrix right;         // V, cols x cols
    IntegerMatrix left_inverse;  // U^{-1}
    IntegerMatrix source;

    std::size_t rank() const;
    /// The nonzero diagonal entries d_1 | d_2 | ... | d_r.
    IntegerVector invariant_factors() const;
};

/// Deterministic for a fixed input. Total: empty matrices are allowed.
SmithDecomposition smith_normal_form(const IntegerMatrix& a);

/// Exact determinant (fraction-free Bareiss elimination).
Integer determinant(const IntegerMatrix& a);

std::size_t rank(const IntegerMatrix& a);

/// Checks U*A*V == D, |det U| == |det V| == 1, U*U^{-1} == I and the divisibility chain.
bool satisfies_smith_invariants(const SmithDecomposition& s);

}  // namespace cornerhom
