#pragma once

#include <string>
#include <vector>

#include "cornerhom/complex.hpp"
#include "cornerhom/homology.hpp"

namespace cornerhom {

struct UctDegree {
    int degree = 0;
    std::size_t mod_rank = 0;     // minimal generator count of H_k(X; Z/m)
    std::size_t tensor_rank = 0;  // of H_k(X; Z) (x) Z/m
    std::size_t tor_rank = 0;     // of Tor(H_{k-1}(X; Z), Z/m)
    bool rank_identity = false;
    /// invariant factors of H_k(X; Z/m) against those of the predicted direct sum
    IntegerVector mod_factors, predicted_factors;
    bool isomorphic = false;
};

struct UctReport {
    int modulus = 0;
    std::vector<UctDegree> degrees;
    bool passes() const;
    std::string to_string() const;
};

/// Invariant factors (> 1) of the direct sum of cyclic groups Z/a_i (a_i = 0 is
/// treated as Z and ignored here; entries 1 vanish).
IntegerVector cyclic_sum_factors(const IntegerVector& orders);

/// Throws std::invalid_argument for m <= 1 or an invalid complex.
UctReport universal_coefficients_check(const GradedFreeComplex& x, int m);

}  // namespace cornerhom
