#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cornerhom/complex.hpp"
#include "cornerhom/exact_sequence.hpp"
#include "cornerhom/expression.hpp"
#include "cornerhom/homology.hpp"

namespace cornerhom {

struct Box {
    Vec3 lo{-1, -1, -1}, hi{1, 1, 1};
    bool contains(const Vec3& p, double slack = 0) const;
};

/// The level set {F = 0} inside a box.
struct Surface {
    std::string name = "custom";
    Expression constraint;
    Box box;
};

struct MorseFunctionSpec {
    Expression f;
};

struct SurfaceCase {
    Surface surface;
    MorseFunctionSpec function;
};

/// "sphere", "torus", "dented_sphere", "genus2"; throws std::invalid_argument otherwise.
SurfaceCase catalog_surface(const std::string& name);
std::vector<std::string> catalog_names();

/// Raised when the numerical engine finds the Morse assumptions violated
/// (a degenerate critical point, a point where 0 is not a regular value).
class MorseAssumptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MorseParameters {
    int grid = 12;                  // seeds per box axis for the critical-point search
    double dedup = 1e-6;
    double margin = 1e-6;           // nondegeneracy margin for projected-Hessian eigenvalues
    double r_cap = 1e-3;            // capture radius, before local scaling
    double r_seed = 1e-2;           // unstable-sphere radius, before local scaling
    double passage_radius = 0.05;
    int circle_seeds = 64;
    double bisection_tolerance = 1e-9;
    int max_steps = 20000;
    double tolerance = 1e-10;       // Runge-Kutta local error tolerance
};

/// Sample points of {F = 0} (grid seeds projected onto the surface) where |grad F| <= 1e-8.
std::vector<Vec3> regularity_violations(const Surface& s, int grid = 12);

struct CriticalPoint {
    std::string label;
    Vec3 position{};
    double value = 0;
    double multiplier = 0;               // grad f = multiplier * grad F
    int index = 0;
    std::vector<Vec3> neg_frame, pos_frame;
    std::vector<double> neg_eigenvalues, pos_eigenvalues;
    double residual = 0;                 // |grad f - multiplier grad F| + |F|
};

/**
 * Index and eigenframes at a critical point with multiplier lambda, from the
 * projected Hessian P (Hess f - lambda Hess F) P on the tangent plane.
 * Frames: an index-2 neg_frame (and index-0 pos_frame) is ordered so that
 * det[e1, e2, grad F] > 0; a single frame vector has its largest component
 * positive. Throws MorseAssumptionError if an eigenvalue is within margin of 0.
 */
CriticalPoint classify_critical_point(const Surface& s, const MorseFunctionSpec& f, const Vec3& p, double lambda,
                                      double margin = 1e-6);

struct CriticalSearch {
    std::vector<CriticalPoint> points;  // sorted by value, labelled c0, c1, ...
    std::size_t seeds = 0;
    std::size_t nonconvergent = 0;
};

/// Lagrange-Newton from grid seeds, deduplicated; throws MorseAssumptionError on a degenerate point.
CriticalSearch find_critical_points(const Surface& s, const MorseFunctionSpec& f, const MorseParameters& params = {});

/// Radii scaled by 1/sqrt of the largest |eigenvalue| at the point, clamped to [0.25, 4].
double capture_radius(const CriticalPoint& c, const MorseParameters& params);
double seed_radius(const CriticalPoint& c, const MorseParameters& params);

enum class FlowDirection { Down, Up };

/// Passage within the passage radius of an index-1 point; side is the sign of the
/// displacement along the point's outgoing direction when leaving (or when captured).
struct Passage {
    std::size_t point = 0;
    int side = 0;
    bool captured = false;
    friend bool operator==(const Passage&, const Passage&) = default;
};

/// Closest approach to an index-1 point; side as for Passage, taken at that moment.
struct Approach {
    std::size_t point = 0;
    double distance = 0;
    int side = 0;
};

struct FlowLeg {
    std::size_t first = 0, last = 0;  // polyline index range
    double energy = 0;                // integral of |x'|^2 dt
};

struct FlowTrajectory {
    Vec3 seed{};
    std::vector<Vec3> points;
    std::vector<double> values;
    std::optional<std::size_t> terminal;  // critical point id, empty if escaped
    int sign = 0;
    std::vector<Passage> passages;
    std::vector<Approach> approaches;  // every index-1 point except the origin
    std::vector<FlowLeg> legs;
    std::size_t steps = 0, rejected = 0;
    bool monotone = true;
    bool underflow = false;
    double max_constraint = 0;  // max |F| over the polyline

    /// Largest relative mismatch |(f(start) - f(end)) - energy| / (f(start) - f(end)) over the legs.
    double energy_defect() const;
};

/**
 * Projected gradient flow x' = -+P grad f by adaptive Dormand-Prince with
 * projection onto {F = 0} after every step. Stops when within the capture
 * radius of a critical point; index-1 points met on the way are passed
 * through on the side the trajectory arrived from. `origin` is excluded from
 * capture and passage detection.
 */
FlowTrajectory integrate_flow(const Surface& s, const MorseFunctionSpec& f, const std::vector<CriticalPoint>& crits,
                              const Vec3& seed, const MorseParameters& params, FlowDirection dir = FlowDirection::Down,
                              std::optional<std::size_t> origin = std::nullopt);

struct IncidenceCell {
    std::size_t from = 0, to = 0;     // critical point ids; index(from) = index(to) + 1
    long long integral = 0;
    int parity = 0;
    std::size_t lines = 0;            // detected flow lines (unsigned)
    std::optional<std::size_t> upward_branches;  // index 2 -> 1 cross-check
    bool flagged = false;
    std::string note;
};

struct IncidenceResult {
    std::vector<IntegerMatrix> integral;  // [k-1]: index k -> index k-1
    std::vector<IntegerMatrix> mod2;
    std::vector<IncidenceCell> cells;
    std::vector<std::string> diagnostics;  // broken trajectories, unresolved boundaries
    std::vector<FlowTrajectory> flows;     // k = 1 branches, upward branches and circle seeds
    bool unresolved = false;               // escaped trajectory or unclassifiable basin boundary
    bool flagged() const;
};

IncidenceResult incidence_matrices(const Surface& s, const MorseFunctionSpec& f, const std::vector<CriticalPoint>& crits,
                                   const MorseParameters& params = {});

enum class Provenance { Symbolic, Numerical };

/**
 * Critical data of a Morse function: points sorted by value, and incidence
 * matrices integral[k-1] (rows: index k-1 points, columns: index k points, in
 * the order of `points`). Symbolic data may carry only mod-2 incidence.
 */
struct MorseData {
    int dimension = 2;
    std::vector<CriticalPoint> points;
    std::vector<IntegerMatrix> integral;
    std::vector<IntegerMatrix> mod2;
    bool has_integral = true;
    Provenance provenance = Provenance::Symbolic;

    std::vector<std::size_t> of_index(int k) const;
};

/// Symbolic data from (label, value, index) triples and incidence over Z
/// (or over Z/2 when integral is false). Matrices are reduced mod 2 for `mod2`.
MorseData symbolic_morse_data(std::vector<CriticalPoint> points, std::vector<IntegerMatrix> incidence, bool integral,
                              int dimension = 2);

/// Generators = critical points by index; throws std::invalid_argument when (d^f)^2 != 0.
/// Over Z/2 the complex carries modulus 2 and the mod-2 incidence.
GradedFreeComplex build_morse_complex(const MorseData& d, Coefficients coeff = Coefficients::integers());

std::vector<HomologyGroup> morse_homology(const MorseData& d, Coefficients coeff = Coefficients::integers());

struct MorseRun {
    CriticalSearch search;
    IncidenceResult incidence;
    MorseData data;
};

MorseRun run_morse(const Surface& s, const MorseFunctionSpec& f, const MorseParameters& params = {});

struct FiltrationLevel {
    double value = 0;
    std::vector<std::size_t> points;
    std::vector<std::size_t> counts;          // m_k per index
    std::vector<HomologyGroup> relative;      // H(F_{<=c}, F_{<c})
    LongExactSequenceReport les;            // integral data only
    bool les_checked = false;
    bool matches = false;                     // relative = Z^{m_k} in degree k, 0 elsewhere
};

struct FiltrationReport {
    std::vector<FiltrationLevel> levels;
    std::vector<HomologyGroup> reassembled, morse;
    bool passes() const;
};

/// Level-by-level quotients of the value filtration. Throws std::invalid_argument if
/// the incidence is not value-decreasing (no filtration by subcomplexes exists).
FiltrationReport filtration_report(const MorseData& d, Coefficients coeff = Coefficients::integers());

/// Polylines as "x y z f" lines, trajectories separated by a blank line.
std::string dump_flows(const std::vector<FlowTrajectory>& flows);

}  // namespace cornerhom
