#pragma once

#include <string>
#include <vector>

#include "cornerhom/integer_matrix.hpp"

namespace cornerhom {

/**
 * Finite graded free abelian chain complex.
 *
 * Degrees run over the window [bottom, top]. boundary(k) is the matrix of
 * D_k : C_k -> C_{k-1} in the ordered generator bases; for k == bottom (and
 * outside the window) it is the zero map. A nonzero modulus m marks a complex
 * defined only over Z/m: entries are read mod m and D*D vanishes mod m.
 */
class GradedFreeComplex {
public:
    GradedFreeComplex() = default;

    /// generators[i] lists the labels of degree bottom + i; boundaries[i] is
    /// D_{bottom + i + 1}. Throws std::invalid_argument on shape or label errors.
    GradedFreeComplex(int bottom, std::vector<std::vector<std::string>> generators,
                      std::vector<IntegerMatrix> boundaries, int modulus = 0);

    /// Complex with generators in degrees [0, n].
    static GradedFreeComplex from_degree_zero(std::vector<std::vector<std::string>> generators,
                                              std::vector<IntegerMatrix> boundaries, int modulus = 0) {
        return {0, std::move(generators), std::move(boundaries), modulus};
    }

    int bottom_degree() const { return bottom_; }
    int top_degree() const { return bottom_ + static_cast<int>(generators_.size()) - 1; }
    bool empty() const { return generators_.empty(); }
    int modulus() const { return modulus_; }

    std::size_t rank(int degree) const;
    const std::vector<std::string>& generators(int degree) const;
    /// Index of a label in its degree, or -1.
    int index_of(int degree, const std::string& label) const;

    /// D_k : C_k -> C_{k-1}; the appropriately shaped zero matrix when absent.
    IntegerMatrix boundary(int degree) const;

    /// Same complex with every degree shifted by `shift`.
    GradedFreeComplex shifted(int shift) const;
    /// Truncation to degrees [lo, hi] (the boundary out of lo is dropped).
    GradedFreeComplex truncated(int lo, int hi) const;

    friend bool operator==(const GradedFreeComplex& a, const GradedFreeComplex& b);

private:
    int bottom_ = 0;
    int modulus_ = 0;
    std::vector<std::vector<std::string>> generators_;
    std::vector<IntegerMatrix> boundaries_;
};

/// Degrees k with D_{k-1} D_k != 0 (mod the complex's modulus). Empty means pass.
std::vector<int> verify_complex(const GradedFreeComplex& x);

}  // namespace cornerhom
