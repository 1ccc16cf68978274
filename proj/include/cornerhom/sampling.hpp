#pragma once

#include <random>
#include <set>

#include "cornerhom/cubical.hpp"

namespace cornerhom::sampling {

/// Random labeled cube of formal dimension k in R^n (n >= k) with integer or
/// half-integer endpoints in [0, 4]; when collapse is set, one formal axis may be collapsed.
cornerhom::LabeledCube random_labeled_cube(std::mt19937_64& rng, int k, std::size_t n, bool collapse);

/// Random chain of `terms` labeled cubes of formal dimension k.
cornerhom::CubicalChain random_chain(std::mt19937_64& rng, int k, std::size_t n, int terms, bool collapse);

/// Level on the axis missing every endpoint of the chain (a quarter-integer).
cornerhom::Dyadic generic_level(std::mt19937_64& rng, const cornerhom::CubicalChain& c, std::size_t axis);
cornerhom::Dyadic generic_level(std::mt19937_64& rng, const std::set<cornerhom::ElementaryCube>& cubes, std::size_t axis);

/// Random set of elementary cubes on the integer grid [0,3]^n, n in {2, 3}.
std::set<cornerhom::ElementaryCube> random_cubical_set(std::mt19937_64& rng, std::size_t n, int count);

}  // namespace cornerhom::sampling
