#pragma once

#include <string>
#include <vector>

#include "cornerhom/complex.hpp"

namespace cornerhom {

/// Coefficient ring for homology: Z, Q or Z/m.
struct Coefficients {
    enum class Kind { Integers, Rationals, Modular };
    Kind kind = Kind::Integers;
    int modulus = 0;

    static Coefficients integers() { return {Kind::Integers, 0}; }
    static Coefficients rationals() { return {Kind::Rationals, 0}; }
    /// Throws std::invalid_argument for m <= 1.
    static Coefficients modular(int m);

    /// "z", "q", "z2", "z12", ... (throws std::invalid_argument otherwise)
    static Coefficients parse(const std::string& text);
    std::string to_string() const;
};

/**
 * One homology group. Over Z: Z^betti plus the torsion invariant factors
 * (each >= 2, each dividing the next). Over Q: betti only. Over Z/m: betti is
 * the minimal number of generators of the Z/m-module (its dimension when m is
 * prime).
 */
struct HomologyGroup {
    int degree = 0;
    std::size_t betti = 0;
    IntegerVector torsion;

    bool is_zero() const { return betti == 0 && torsion.empty(); }
    std::string to_string() const;
    friend bool operator==(const HomologyGroup& a, const HomologyGroup& b) {
        return a.degree == b.degree && a.betti == b.betti && a.torsion == b.torsion;
    }
};

/// One group per degree of the complex window. Throws std::invalid_argument when
/// the complex fails verify_complex or the coefficients do not match its modulus.
std::vector<HomologyGroup> homology(const GradedFreeComplex& x, Coefficients coeff = Coefficients::integers());

/// Nontrivial invariant factors (each in (1, m], dividing the next) of H_k(X; Z/m)
/// computed directly as the subquotient {x : D x = 0 mod m} / (im D + m C_k).
IntegerVector modular_invariant_factors(const GradedFreeComplex& x, int degree, int m);

/**
 * Explicit presentation of H_k(X; Z) as Z/d_1 + ... + Z/d_t + Z^b with chosen
 * representative cycles, so maps between homology groups can be written as
 * integer matrices on homology coordinates.
 */
class HomologyPresentation {
public:
    HomologyPresentation(const GradedFreeComplex& x, int degree);

    int degree() const { return degree_; }
    std::size_t size() const { return orders_.size(); }
    /// Order of each generator; 0 for free generators.
    const IntegerVector& orders() const { return orders_; }
    /// Representative cycles, one column per generator.
    const IntegerMatrix& representatives() const { return representatives_; }

    /// Homology coordinates of a cycle (torsion entries reduced into [0, d)).
    /// Throws std::logic_error if the vector is not a cycle.
    IntegerVector coordinates(const IntegerVector& cycle) const;
    IntegerVector reduce(IntegerVector coords) const;

private:
    int degree_;
    IntegerMatrix cycles_;           // basis of ker D_k (columns)
    IntegerMatrix to_smith_;         // U acting on cycle coordinates
    std::vector<std::size_t> kept_;  // rows of U that survive
    IntegerVector orders_;
    IntegerMatrix representatives_;
};

/// Matrix of the map on homology induced by a degree-preserving chain-level matrix
/// from the source presentation's chain group to the target's.
IntegerMatrix induced_map(const HomologyPresentation& source, const HomologyPresentation& target,
                          const IntegerMatrix& chain_matrix);

}  // namespace cornerhom
