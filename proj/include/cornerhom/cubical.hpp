#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cornerhom/complex.hpp"
#include "cornerhom/exact_sequence.hpp"

namespace cornerhom {

/// Exact dyadic rational num / 2^exp, kept in lowest terms (num odd or exp == 0).
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(std::int64_t value) : num_(value) {}  // NOLINT: integers convert implicitly
    Dyadic(std::int64_t num, int exp);

    /// "3", "-5/8", "0.375"; throws std::invalid_argument for non-dyadic input.
    static Dyadic parse(const std::string& text);

    std::int64_t numerator() const { return num_; }
    int exponent() const { return exp_; }
    double to_double() const;
    std::string to_string() const;

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b);
    friend Dyadic midpoint(const Dyadic& a, const Dyadic& b);
    friend bool operator==(const Dyadic& a, const Dyadic& b) = default;
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

private:
    std::int64_t num_ = 0;
    int exp_ = 0;
};

/// [lo, hi] with lo <= hi; lo == hi is a degenerate (point) component.
struct Interval {
    Dyadic lo, hi;

    static Interval point(Dyadic v) { return {v, v}; }
    bool degenerate() const { return lo == hi; }
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Product of intervals in R^N.
struct ElementaryCube {
    std::vector<Interval> components;

    std::size_t ambient_dim() const { return components.size(); }
    int dimension() const;
    /// Indices of the nondegenerate components, increasing.
    std::vector<std::size_t> free_axes() const;
    /// Label such as "[0,1/2]x{1}"; parse_cube inverts it.
    std::string to_string() const;
    friend auto operator<=>(const ElementaryCube&, const ElementaryCube&) = default;
};

/// Throws std::invalid_argument on malformed text or lo > hi.
ElementaryCube parse_cube(const std::string& text);

/// How one formal coordinate of [0,1]^k lands in the target cube.
struct FormalAxis {
    enum class Direction { Increasing, Decreasing, Collapsed };
    std::size_t component = 0;  // must be 0 when collapsed
    Direction direction = Direction::Increasing;
    friend auto operator<=>(const FormalAxis&, const FormalAxis&) = default;
};

/**
 * Affine map [0,1]^k -> target. Non-collapsed formal axes are in bijection with
 * the nondegenerate components of the target; any collapsed axis makes the cube
 * degenerate (image dimension below k).
 */
struct LabeledCube {
    ElementaryCube target;
    std::vector<FormalAxis> axes;

    /// Canonical labeling: free components in increasing order, all increasing.
    static LabeledCube canonical(ElementaryCube target);
    /// Throws std::invalid_argument unless the invariants above hold.
    void validate() const;

    int formal_dim() const { return static_cast<int>(axes.size()); }
    bool degenerate() const;
    bool is_canonical() const;
    friend auto operator<=>(const LabeledCube&, const LabeledCube&) = default;
};

using Coefficient = std::int64_t;

/// Formal integer combination of labeled cubes of one formal dimension.
class CubicalChain {
public:
    explicit CubicalChain(int formal_dim = 0) : dim_(formal_dim) {}
    CubicalChain(int formal_dim, std::initializer_list<std::pair<LabeledCube, Coefficient>> terms);

    static CubicalChain of(const ElementaryCube& q, Coefficient c = 1);

    int formal_dim() const { return dim_; }
    const std::map<LabeledCube, Coefficient>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Coefficient coefficient(const LabeledCube& q) const;

    /// Adds c * q; zero coefficients are never stored. Throws on a dimension mismatch.
    void add(const LabeledCube& q, Coefficient c);
    void add(const CubicalChain& other, Coefficient scale = 1);

    std::string to_string() const;

    friend CubicalChain operator+(CubicalChain a, const CubicalChain& b);
    friend CubicalChain operator-(CubicalChain a, const CubicalChain& b);
    friend CubicalChain operator*(Coefficient s, CubicalChain a);
    friend bool operator==(const CubicalChain&, const CubicalChain&) = default;

private:
    int dim_;
    std::map<LabeledCube, Coefficient> terms_;
};

/// Drops degenerate cubes and rewrites every cube in canonical labeling, with
/// the sign of the coordinate permutation times (-1) per reversed coordinate.
CubicalChain normalize_chain(const CubicalChain& c);

/// Sum over formal axes i of (-1)^i (face at t=1 - face at t=0), normalized.
/// Throws std::invalid_argument for formal dimension 0.
CubicalChain cube_boundary(const CubicalChain& c);

struct CubicalComplex {
    GradedFreeComplex complex;
    /// cells[k] lists the k-cubes in generator order
    std::vector<std::vector<ElementaryCube>> cells;
    /// faces added to close the input set
    std::vector<ElementaryCube> added;
};

/// All faces of the given cubes (including the cubes). Throws on mixed ambient dimensions.
std::set<ElementaryCube> face_closure(const std::set<ElementaryCube>& cubes);
/// Cellular complex of the face closure; labels are the cube strings.
CubicalComplex build_complex(const std::set<ElementaryCube>& cubes);
/// Coordinates of a chain of canonical cubes in the generator basis of degree k.
IntegerVector chain_coordinates(const CubicalComplex& x, const CubicalChain& c);

struct CutResult {
    CubicalChain plus;   // pieces with axis coordinate >= level
    CubicalChain minus;  // pieces with axis coordinate <= level
    CubicalChain slice;  // one dimension lower
    std::size_t axis = 0;
    Dyadic level;
};

/**
 * Splits the normalized chain along x_axis = level. A cube crossing the level,
 * A x [a,b] x B with p free components in A, gives plus A x [l,b] x B, minus
 * A x [a,l] x B and slice (-1)^p A x {l} x B; then
 *   d(plus) = (dc)^+ - slice,  d(minus) = (dc)^- + slice,  d(slice) = -(dc)^0.
 * Throws std::invalid_argument when the level equals a point coordinate or an
 * interval endpoint on the axis.
 */
CutResult cut_chain(const CubicalChain& c, std::size_t axis, const Dyadic& level);

/// True when all three boundary identities above hold exactly.
bool cut_identity_holds(const CubicalChain& c, std::size_t axis, const Dyadic& level);

/**
 * Crease cell over a cube Q crossing the level: the prism Q x [0,1] in R^{N+1}
 * (extra coordinate last) whose top face is split along the level. Its boundary
 * is C(dQ) + (-1)^k (Q^+ x {1} + Q^- x {1} - Q x {0}), where C of a face that
 * misses the level is the plain box face x [0,1].
 */
struct CreaseCell {
    ElementaryCube base;
    std::size_t axis = 0;
    Dyadic level;
    friend auto operator<=>(const CreaseCell&, const CreaseCell&) = default;
};

/// Combination of boxes (canonical cubes in R^{N+1}) and crease cells.
class CreaseChain {
public:
    explicit CreaseChain(int formal_dim = 0) : boxes_(formal_dim), dim_(formal_dim) {}

    int formal_dim() const { return dim_; }
    const CubicalChain& boxes() const { return boxes_; }
    const std::map<CreaseCell, Coefficient>& creases() const { return creases_; }
    bool is_zero() const { return boxes_.is_zero() && creases_.empty(); }

    void add_box(const CubicalChain& c, Coefficient scale = 1);
    void add_crease(const CreaseCell& cell, Coefficient c);
    void add(const CreaseChain& other, Coefficient scale = 1);

    std::string to_string() const;
    friend bool operator==(const CreaseChain&, const CreaseChain&) = default;

private:
    CubicalChain boxes_;
    std::map<CreaseCell, Coefficient> creases_;
    int dim_;
};

/// Boundary of a crease chain (formal dimension >= 1).
CreaseChain crease_boundary(const CreaseChain& c);

/// c x {t} in R^{N+1}, as a crease chain of boxes.
CreaseChain embed_at(const CubicalChain& c, const Dyadic& t);

/**
 * K(c) = sum over cubes Q of c of (-1)^{dim Q} C(Q), one dimension higher, with
 * dK(c) + K(dc) = (plus + minus) x {1} - c x {0} exactly.
 * Throws std::invalid_argument for dimension 0 or a non-generic level.
 */
CreaseChain crease_homotopy(const CubicalChain& c, std::size_t axis, const Dyadic& level);

/// dK(c) + K(dc) == (cut c) x {1} - c x {0}
bool crease_identity_holds(const CubicalChain& c, std::size_t axis, const Dyadic& level);

/// Every cube of the closed set that crosses the level replaced by its halves and slice.
std::set<ElementaryCube> subdivide(const std::set<ElementaryCube>& cubes, std::size_t axis, const Dyadic& level);

/// Chain map Q -> Q^+ + Q^- from build_complex(cubes) to build_complex(subdivide(...)).
ChainMap subdivision_map(const CubicalComplex& coarse, const CubicalComplex& fine, std::size_t axis,
                         const Dyadic& level);

}  // namespace cornerhom
