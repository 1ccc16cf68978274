#include "cornerhom/morse.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace cornerhom {

namespace {

using Eigen::Matrix2d;
using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::Vector3d;
using Eigen::Vector4d;

Vector3d ev(const Vec3& p) { return {p[0], p[1], p[2]}; }
Vec3 sv(const Vector3d& v) { return {v[0], v[1], v[2]}; }

Matrix3d em(const Mat3& m) {
    Matrix3d r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return r;
}

bool finite(const Jet& j) {
    if (!std::isfinite(j.value)) return false;
    for (double g : j.gradient)
        if (!std::isfinite(g)) return false;
    return true;
}

int sign_of(double v) { return v < 0 ? -1 : 1; }

std::string format_point(const Vec3& p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", p[0], p[1], p[2]);
    return buf;
}

// Newton along grad F onto {F = 0}.
bool project(const Surface& s, Vector3d& p) {
    for (int it = 0; it < 60; ++it) {
        const Jet j = s.constraint.jet(sv(p));
        if (!finite(j)) return false;
        const Vector3d g = ev(j.gradient);
        const double n2 = g.squaredNorm();
        if (n2 < 1e-20) return false;
        Vector3d step = j.value / n2 * g;
        if (step.norm() > 0.5) step *= 0.5 / step.norm();
        p -= step;
        if (step.norm() < 1e-15 || std::abs(j.value) < 1e-15) break;
    }
    const double r = s.constraint.value(sv(p));
    return std::isfinite(r) && std::abs(r) <= 1e-11;
}

double box_size(const Box& b) {
    double m = 0;
    for (std::size_t i = 0; i < 3; ++i) m = std::max(m, b.hi[i] - b.lo[i]);
    return m;
}

struct Lagrange {
    Vector4d residual;
    Matrix4d jacobian;
};

bool lagrange_system(const Surface& s, const MorseFunctionSpec& f, const Vector3d& p, double lambda, Lagrange& out) {
    const Jet fj = f.f.jet(sv(p));
    const Jet cj = s.constraint.jet(sv(p));
    if (!finite(fj) || !finite(cj)) return false;
    const Vector3d gf = ev(fj.gradient), gF = ev(cj.gradient);
    out.residual.head<3>() = gf - lambda * gF;
    out.residual(3) = cj.value;
    out.jacobian.setZero();
    out.jacobian.topLeftCorner<3, 3>() = em(fj.hessian) - lambda * em(cj.hessian);
    out.jacobian.block<3, 1>(0, 3) = -gF;
    out.jacobian.block<1, 3>(3, 0) = gF.transpose();
    return out.jacobian.allFinite();
}

struct NewtonResult {
    bool converged = false;
    Vector3d p;
    double lambda = 0;
};

NewtonResult lagrange_newton(const Surface& s, const MorseFunctionSpec& f, Vector3d p) {
    NewtonResult r;
    if (!project(s, p)) return r;
    {
        const Jet fj = f.f.jet(sv(p));
        const Jet cj = s.constraint.jet(sv(p));
        r.lambda = ev(fj.gradient).dot(ev(cj.gradient)) / ev(cj.gradient).squaredNorm();
    }
    const double slack = 0.1 * box_size(s.box);
    Lagrange sys;
    for (int it = 0; it < 80; ++it) {
        if (!lagrange_system(s, f, p, r.lambda, sys)) return r;
        const double norm = sys.residual.norm();
        if (sys.residual.head<3>().norm() <= 1e-11 && std::abs(sys.residual(3)) <= 1e-13) {
            r.converged = true;
            break;
        }
        Eigen::FullPivLU<Matrix4d> lu(sys.jacobian);
        if (!lu.isInvertible()) return r;
        const Vector4d delta = lu.solve(-sys.residual);
        double t = 1;
        bool accepted = false;
        for (int halve = 0; halve < 30 && !accepted; ++halve, t *= 0.5) {
            const Vector3d cp = p + t * delta.head<3>();
            const double cl = r.lambda + t * delta(3);
            Lagrange trial;
            if (lagrange_system(s, f, cp, cl, trial) && trial.residual.norm() < (1 - 1e-4 * t) * norm) {
                p = cp;
                r.lambda = cl;
                accepted = true;
            }
        }
        if (!accepted) {
            // stalled at rounding level: accept if already tight enough
            r.converged = sys.residual.head<3>().norm() <= 1e-9 && std::abs(sys.residual(3)) <= 1e-11;
            break;
        }
        if (!s.box.contains(sv(p), slack)) return r;
    }
    r.p = p;
    if (r.converged && !s.box.contains(sv(p))) r.converged = false;
    return r;
}

void orient_frame(std::vector<Vec3>& frame, const Vector3d& normal) {
    if (frame.size() == 2) {
        if (ev(frame[0]).cross(ev(frame[1])).dot(normal) < 0)
            for (double& v : frame[1]) v = -v;
    } else if (frame.size() == 1) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < 3; ++i)
            if (std::abs(frame[0][i]) > std::abs(frame[0][best]) + 1e-12) best = i;
        if (frame[0][best] < 0)
            for (double& v : frame[0]) v = -v;
    }
}

double local_scale(const CriticalPoint& c) {
    double m = 0;
    for (double v : c.neg_eigenvalues) m = std::max(m, std::abs(v));
    for (double v : c.pos_eigenvalues) m = std::max(m, std::abs(v));
    if (m == 0) return 1;
    return std::clamp(1 / std::sqrt(m), 0.25, 4.0);
}

}  // namespace

bool Box::contains(const Vec3& p, double slack) const {
    for (std::size_t i = 0; i < 3; ++i)
        if (!(p[i] >= lo[i] - slack && p[i] <= hi[i] + slack)) return false;
    return true;
}

SurfaceCase catalog_surface(const std::string& name) {
    SurfaceCase c;
    c.surface.name = name;
    if (name == "sphere") {
        c.surface.constraint = Expression::parse("x^2 + y^2 + z^2 - 1");
        c.function.f = Expression::parse("z");
        c.surface.box = {{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}};
    } else if (name == "torus") {
        c.surface.constraint = Expression::parse("(sqrt(x^2 + y^2) - 2)^2 + z^2 - 1");
        c.function.f = Expression::parse("x");
        c.surface.box = {{-3.5, -3.5, -1.5}, {3.5, 3.5, 1.5}};
    } else if (name == "dented_sphere") {
        c.surface.constraint = Expression::parse("x^2 + y^2 + (z - x^2)^2 - 1");
        c.function.f = Expression::parse("z");
        c.surface.box = {{-1.5, -1.5, -1.5}, {1.5, 1.5, 2.5}};
    } else if (name == "genus2") {
        c.surface.constraint = Expression::parse("(y^2 - x^2*(3 - x^2))^2 + z^2 - 1");
        c.function.f = Expression::parse("x");
        c.surface.box = {{-2.2, -2.2, -1.5}, {2.2, 2.2, 1.5}};
    } else {
        throw std::invalid_argument("unknown catalog surface '" + name + "'");
    }
    return c;
}

std::vector<std::string> catalog_names() { return {"sphere", "torus", "dented_sphere", "genus2"}; }

std::vector<Vec3> regularity_violations(const Surface& s, int grid) {
    std::vector<Vec3> bad;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            for (int k = 0; k < grid; ++k) {
                Vector3d p;
                const int idx[3] = {i, j, k};
                for (int a = 0; a < 3; ++a) {
                    const auto u = static_cast<std::size_t>(a);
                    p[a] = s.box.lo[u] + (idx[a] + 0.5) / grid * (s.box.hi[u] - s.box.lo[u]);
                }
                // plain Newton until it stalls: at a multiple root it converges only linearly,
                // but |grad F| still shrinks below the threshold
                Jet jt;
                for (int it = 0; it < 400; ++it) {
                    jt = s.constraint.jet(sv(p));
                    if (!finite(jt) || jt.value == 0) break;
                    const Vector3d g = ev(jt.gradient);
                    const double n2 = g.squaredNorm();
                    if (n2 == 0) break;
                    Vector3d step = jt.value / n2 * g;
                    if (step.norm() > 0.5) step *= 0.5 / step.norm();
                    if (step.norm() <= 1e-300) break;
                    p -= step;
                }
                jt = s.constraint.jet(sv(p));
                if (finite(jt) && std::abs(jt.value) <= 1e-6 && s.box.contains(sv(p)) && ev(jt.gradient).norm() <= 1e-8)
                    bad.push_back(sv(p));
            }
    return bad;
}

CriticalPoint classify_critical_point(const Surface& s, const MorseFunctionSpec& f, const Vec3& p, double lambda,
                                      double margin) {
    const Jet cj = s.constraint.jet(p);
    const Jet fj = f.f.jet(p);
    const Vector3d g = ev(cj.gradient);
    if (!finite(cj) || g.norm() <= 1e-8)
        throw MorseAssumptionError("0 is not a regular value of the constraint near " + format_point(p));
    const Vector3d n = g.normalized();
    int a = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(n[i]) < std::abs(n[a])) a = i;
    Vector3d axis = Vector3d::Zero();
    axis[a] = 1;
    const Vector3d t1 = (axis - axis.dot(n) * n).normalized();
    const Vector3d t2 = n.cross(t1);
    Eigen::Matrix<double, 3, 2> tangent;
    tangent << t1, t2;
    const Matrix3d m = em(fj.hessian) - lambda * em(cj.hessian);
    const Matrix2d k = tangent.transpose() * m * tangent;
    Eigen::SelfAdjointEigenSolver<Matrix2d> es(k);

    CriticalPoint c;
    c.position = p;
    c.value = fj.value;
    c.multiplier = lambda;
    c.residual = (ev(fj.gradient) - lambda * g).norm() + std::abs(cj.value);
    for (int i = 0; i < 2; ++i) {
        const double mu = es.eigenvalues()(i);
        if (std::abs(mu) < margin) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3g", mu);
            throw MorseAssumptionError("degenerate critical point at " + format_point(p) + " (eigenvalue " + buf + ")");
        }
        const Vec3 v = sv(tangent * es.eigenvectors().col(i));
        if (mu < 0) {
            c.neg_frame.push_back(v);
            c.neg_eigenvalues.push_back(mu);
        } else {
            c.pos_frame.push_back(v);
            c.pos_eigenvalues.push_back(mu);
        }
    }
    orient_frame(c.neg_frame, n);
    orient_frame(c.pos_frame, n);
    c.index = static_cast<int>(c.neg_frame.size());
    return c;
}

CriticalSearch find_critical_points(const Surface& s, const MorseFunctionSpec& f, const MorseParameters& params) {
    CriticalSearch out;
    std::vector<std::pair<Vec3, double>> found;
    const int n = params.grid;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                Vector3d p;
                const int idx[3] = {i, j, k};
                for (int a = 0; a < 3; ++a) {
                    const auto u = static_cast<std::size_t>(a);
                    p[a] = s.box.lo[u] + (idx[a] + 0.5) / n * (s.box.hi[u] - s.box.lo[u]);
                }
                ++out.seeds;
                const auto r = lagrange_newton(s, f, p);
                if (!r.converged) {
                    ++out.nonconvergent;
                    continue;
                }
                const bool seen = std::any_of(found.begin(), found.end(), [&](const auto& q) {
                    return (ev(q.first) - r.p).norm() <= params.dedup;
                });
                if (!seen) found.emplace_back(sv(r.p), r.lambda);
            }
    for (const auto& [p, lambda] : found) out.points.push_back(classify_critical_point(s, f, p, lambda, params.margin));
    std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.position < b.position;
    });
    for (std::size_t i = 0; i < out.points.size(); ++i) out.points[i].label = "c" + std::to_string(i);
    return out;
}

double capture_radius(const CriticalPoint& c, const MorseParameters& params) { return params.r_cap * local_scale(c); }

double seed_radius(const CriticalPoint& c, const MorseParameters& params) { return params.r_seed * local_scale(c); }

double FlowTrajectory::energy_defect() const {
    double worst = 0;
    for (const auto& leg : legs) {
        const double df = std::abs(values[leg.first] - values[leg.last]);
        if (df < 1e-12) continue;
        worst = std::max(worst, std::abs(df - leg.energy) / df);
    }
    return worst;
}

namespace {

// Dormand-Prince 5(4)
constexpr double A[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double B[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
constexpr double BSTAR[7] = {5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

class Flow {
public:
    Flow(const Surface& s, const MorseFunctionSpec& f, FlowDirection dir) : s_(s), f_(f), sign_(dir == FlowDirection::Down ? -1 : 1) {}

    bool velocity(const Vector3d& p, Vector3d& v) const {
        const Jet cj = s_.constraint.jet(sv(p));
        const Jet fj = f_.f.jet(sv(p));
        if (!finite(cj) || !finite(fj)) return false;
        const Vector3d n = ev(cj.gradient).normalized();
        const Vector3d g = ev(fj.gradient);
        v = sign_ * (g - g.dot(n) * n);
        return v.allFinite();
    }

    // one trial step; returns false on non-finite evaluation
    bool step(const Vector3d& p, double h, Vector3d& next, double& err, double& energy) const {
        Vector3d k[7];
        for (int i = 0; i < 7; ++i) {
            Vector3d y = p;
            for (int j = 0; j < i; ++j) y += h * A[i][j] * k[j];
            if (!velocity(y, k[i])) return false;
        }
        next = p;
        Vector3d e = Vector3d::Zero();
        energy = 0;
        for (int i = 0; i < 7; ++i) {
            next += h * B[i] * k[i];
            e += h * (B[i] - BSTAR[i]) * k[i];
            energy += h * B[i] * k[i].squaredNorm();
        }
        err = e.cwiseAbs().maxCoeff();
        return next.allFinite();
    }

private:
    const Surface& s_;
    const MorseFunctionSpec& f_;
    double sign_;
};

Vector3d outgoing(const CriticalPoint& c, FlowDirection dir) {
    const auto& frame = dir == FlowDirection::Down ? c.neg_frame : c.pos_frame;
    return frame.empty() ? Vector3d::Zero() : ev(frame[0]);
}

}  // namespace

FlowTrajectory integrate_flow(const Surface& s, const MorseFunctionSpec& f, const std::vector<CriticalPoint>& crits,
                              const Vec3& seed, const MorseParameters& params, FlowDirection dir,
                              std::optional<std::size_t> origin) {
    FlowTrajectory t;
    t.seed = seed;
    const std::size_t n = crits.size();
    std::vector<double> rcap(n), rseed(n);
    for (std::size_t j = 0; j < n; ++j) {
        rcap[j] = capture_radius(crits[j], params);
        rseed[j] = seed_radius(crits[j], params);
    }
    std::vector<char> excluded(n, 0);
    if (origin) excluded[*origin] = 1;
    std::vector<long> open(n, -1);  // passage index while inside the passage radius
    std::vector<double> dmin(n, std::numeric_limits<double>::infinity());
    std::vector<int> aside(n, 0);
    const int terminal_index = dir == FlowDirection::Down ? 0 : 2;
    const double better = dir == FlowDirection::Down ? -1 : 1;
    const double slack = 0.25 * box_size(s.box);
    const Flow flow(s, f, dir);

    Vector3d p = ev(seed);
    if (!project(s, p)) return t;
    double fp = f.f.value(sv(p));
    auto push = [&](const Vector3d& q, double fq) {
        t.points.push_back(sv(q));
        t.values.push_back(fq);
        t.max_constraint = std::max(t.max_constraint, std::abs(s.constraint.value(sv(q))));
    };
    auto approach = [&](const Vector3d& q) {
        for (std::size_t j = 0; j < n; ++j) {
            if (excluded[j] || crits[j].index != 1) continue;
            const Vector3d d = q - ev(crits[j].position);
            if (d.norm() < dmin[j]) {
                dmin[j] = d.norm();
                aside[j] = sign_of(d.dot(outgoing(crits[j], dir)));
            }
        }
    };
    auto finish = [&] {
        for (std::size_t j = 0; j < n; ++j)
            if (crits[j].index == 1 && std::isfinite(dmin[j])) t.approaches.push_back({j, dmin[j], aside[j]});
    };
    push(p, fp);
    approach(p);
    FlowLeg leg{0, 0, 0};
    auto close_leg = [&] {
        leg.last = t.points.size() - 1;
        t.legs.push_back(leg);
    };
    auto close_open = [&](const Vector3d& q) {
        for (std::size_t j = 0; j < n; ++j)
            if (open[j] >= 0) {
                t.passages[static_cast<std::size_t>(open[j])].side = sign_of((q - ev(crits[j].position)).dot(outgoing(crits[j], dir)));
                open[j] = -1;
            }
    };

    double h = 1e-2;
    while (t.steps < static_cast<std::size_t>(params.max_steps)) {
        Vector3d next;
        double err = 0, energy = 0;
        bool ok = flow.step(p, h, next, err, energy) && err <= params.tolerance;
        double fn = 0;
        if (ok) ok = project(s, next);
        if (ok) {
            fn = f.f.value(sv(next));
            if (!(better * (fn - fp) > 0)) {
                ok = false;
                err = 0;  // monotonicity rejection: halve
            }
        }
        if (!ok) {
            ++t.rejected;
            const double factor = (err > 0 && std::isfinite(err)) ? std::max(0.1, 0.9 * std::pow(params.tolerance / err, 0.2)) : 0.5;
            h *= std::min(factor, 0.5);
            if (h < 1e-14) {
                t.underflow = true;
                break;
            }
            continue;
        }
        p = next;
        fp = fn;
        push(p, fp);
        approach(p);
        leg.energy += energy;
        ++t.steps;
        h *= err > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(params.tolerance / err, 0.2))) : 5.0;
        h = std::min(h, 0.5);
        if (!s.box.contains(sv(p), slack)) break;

        bool restarted = false;
        for (std::size_t j = 0; j < n && !restarted; ++j) {
            if (excluded[j]) continue;
            const Vector3d d = p - ev(crits[j].position);
            const double dist = d.norm();
            if (crits[j].index == 1) {
                if (dist < params.passage_radius && open[j] < 0) {
                    open[j] = static_cast<long>(t.passages.size());
                    t.passages.push_back({j, 0, false});
                } else if (dist >= params.passage_radius && open[j] >= 0) {
                    t.passages[static_cast<std::size_t>(open[j])].side = sign_of(d.dot(outgoing(crits[j], dir)));
                    open[j] = -1;
                    excluded[j] = 1;
                }
            }
            if (dist >= rcap[j]) continue;
            if (crits[j].index != 1 || crits[j].index == terminal_index) {
                close_open(p);
                t.terminal = j;
                close_leg();
                finish();
                return t;
            }
            // pass through the index-1 point on the side we arrived from
            const Vector3d out = outgoing(crits[j], dir);
            const int side = sign_of(d.dot(out));
            if (open[j] < 0) {
                open[j] = static_cast<long>(t.passages.size());
                t.passages.push_back({j, 0, false});
            }
            t.passages[static_cast<std::size_t>(open[j])] = {j, side, true};
            open[j] = -1;
            excluded[j] = 1;
            dmin[j] = 0;
            aside[j] = side;
            close_leg();
            Vector3d q = ev(crits[j].position) + rseed[j] * side * out;
            if (!project(s, q)) {
                close_open(p);
                finish();
                return t;
            }
            p = q;
            fp = f.f.value(sv(p));
            push(p, fp);
            leg = {t.points.size() - 1, 0, 0};
            h = 1e-2;
            restarted = true;
        }
    }
    close_open(p);
    close_leg();
    finish();
    return t;
}

bool IncidenceResult::flagged() const {
    return unresolved || std::any_of(cells.begin(), cells.end(), [](const IncidenceCell& c) { return c.flagged; });
}

namespace {

struct Itinerary {
    std::optional<std::size_t> terminal;
    std::map<std::size_t, Approach> approaches;

    bool same_sides(const Itinerary& o) const {
        if (terminal != o.terminal || approaches.size() != o.approaches.size()) return false;
        for (const auto& [j, a] : approaches) {
            const auto it = o.approaches.find(j);
            if (it == o.approaches.end() || it->second.side != a.side) return false;
        }
        return true;
    }
};

Itinerary itinerary_of(const FlowTrajectory& t) {
    Itinerary it;
    it.terminal = t.terminal;
    for (const auto& a : t.approaches) it.approaches[a.point] = a;
    return it;
}

class IncidenceEngine {
public:
    IncidenceEngine(const Surface& s, const MorseFunctionSpec& f, const std::vector<CriticalPoint>& crits,
                    const MorseParameters& params)
        : s_(s), f_(f), crits_(crits), params_(params) {}

    IncidenceResult run() {
        for (std::size_t i = 0; i < crits_.size(); ++i) {
            if (crits_[i].index < 0 || crits_[i].index > 2)
                throw std::invalid_argument("critical point index outside {0, 1, 2}");
            by_index_[static_cast<std::size_t>(crits_[i].index)].push_back(i);
        }
        for (int k = 1; k <= 2; ++k)
            for (std::size_t x : by_index_[static_cast<std::size_t>(k)])
                for (std::size_t y : by_index_[static_cast<std::size_t>(k - 1)]) {
                    IncidenceCell cell;
                    cell.from = x;
                    cell.to = y;
                    cells_[{x, y}] = cell;
                }

        descend_saddles();
        ascend_saddles();
        for (std::size_t x : by_index_[2]) sweep_maximum(x);

        for (auto& [key, cell] : cells_) {
            cell.parity = static_cast<int>(cell.lines % 2);
            if (crits_[key.first].index == 2) {
                const auto it = upward_.find(key);
                cell.upward_branches = it == upward_.end() ? 0 : it->second;
                if (*cell.upward_branches != cell.lines) {
                    cell.flagged = true;
                    cell.note = std::to_string(cell.lines) + " crossings detected but " +
                                std::to_string(*cell.upward_branches) + " upward branches arrive";
                }
            }
        }
        IncidenceResult r = std::move(result_);
        r.integral = {IntegerMatrix(by_index_[0].size(), by_index_[1].size()),
                      IntegerMatrix(by_index_[1].size(), by_index_[2].size())};
        r.mod2 = r.integral;
        for (auto& [key, cell] : cells_) {
            const int k = crits_[key.first].index;
            const auto col = position(key.first), row = position(key.second);
            r.integral[static_cast<std::size_t>(k - 1)](row, col) = static_cast<long>(cell.integral);
            r.mod2[static_cast<std::size_t>(k - 1)](row, col) = cell.parity;
            r.cells.push_back(cell);
        }
        return r;
    }

private:
    const Surface& s_;
    const MorseFunctionSpec& f_;
    const std::vector<CriticalPoint>& crits_;
    const MorseParameters& params_;
    std::vector<std::size_t> by_index_[3];
    std::map<std::pair<std::size_t, std::size_t>, IncidenceCell> cells_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> upward_;
    std::map<std::size_t, std::vector<double>> targeted_;
    IncidenceResult result_;

    std::size_t position(std::size_t id) const {
        const auto& list = by_index_[static_cast<std::size_t>(crits_[id].index)];
        return static_cast<std::size_t>(std::find(list.begin(), list.end(), id) - list.begin());
    }

    const std::string& label(std::size_t id) const { return crits_[id].label; }

    FlowTrajectory flow_from(std::size_t origin, const Vector3d& offset, FlowDirection dir) {
        Vector3d q = ev(crits_[origin].position) + offset;
        project(s_, q);
        return integrate_flow(s_, f_, crits_, sv(q), params_, dir, origin);
    }

    void descend_saddles() {
        for (std::size_t x : by_index_[1]) {
            const Vector3d e = ev(crits_[x].neg_frame[0]);
            for (int side : {1, -1}) {
                auto t = flow_from(x, side * seed_radius(crits_[x], params_) * e, FlowDirection::Down);
                t.sign = side;
                if (!t.terminal || crits_[*t.terminal].index != 0) {
                    result_.unresolved = true;
                    result_.diagnostics.push_back("descending branch of " + label(x) + " did not reach a minimum");
                } else {
                    auto& cell = cells_[{x, *t.terminal}];
                    cell.integral += side;
                    ++cell.lines;
                    if (!t.passages.empty())
                        result_.diagnostics.push_back("descending branch of " + label(x) + " passes an index-1 point before " +
                                                      label(*t.terminal));
                }
                result_.flows.push_back(std::move(t));
            }
        }
    }

    void ascend_saddles() {
        for (std::size_t y : by_index_[1]) {
            const Vector3d e = ev(crits_[y].pos_frame[0]);
            for (int side : {1, -1}) {
                auto t = flow_from(y, side * seed_radius(crits_[y], params_) * e, FlowDirection::Up);
                t.sign = side;
                if (!t.terminal || crits_[*t.terminal].index != 2) {
                    result_.unresolved = true;
                    result_.diagnostics.push_back("ascending branch of " + label(y) + " did not reach a maximum");
                } else if (!t.passages.empty()) {
                    result_.diagnostics.push_back("ascending branch of " + label(y) + " reaches " + label(*t.terminal) +
                                                  " through another index-1 point (not counted)");
                } else {
                    ++upward_[{*t.terminal, y}];
                    targeted_[*t.terminal].push_back(arrival_angle(*t.terminal, ev(t.points.back())));
                }
                result_.flows.push_back(std::move(t));
            }
        }
    }

    // seed-circle parameter whose linearized downward flow passes through q
    double arrival_angle(std::size_t x, const Vector3d& q) const {
        const auto& c = crits_[x];
        const Vector3d d = q - ev(c.position);
        const double a = d.dot(ev(c.neg_frame[0])), b = d.dot(ev(c.neg_frame[1]));
        const double m1 = std::abs(c.neg_eigenvalues[0]), m2 = std::abs(c.neg_eigenvalues[1]);
        const double r = seed_radius(c, params_);
        auto radius = [&](double tau) { return std::hypot(a * std::exp(m1 * tau), b * std::exp(m2 * tau)); };
        double lo = 0, hi = 1;
        if (radius(0) < r) {
            while (radius(hi) < r && hi < 1e3) hi *= 2;
            for (int i = 0; i < 100; ++i) {
                const double mid = 0.5 * (lo + hi);
                (radius(mid) < r ? lo : hi) = mid;
            }
        } else {
            hi = 0;
        }
        return std::atan2(b * std::exp(m2 * hi), a * std::exp(m1 * hi));
    }

    Vector3d circle_offset(std::size_t x, double theta) const {
        const auto& c = crits_[x];
        return seed_radius(c, params_) * (std::cos(theta) * ev(c.neg_frame[0]) + std::sin(theta) * ev(c.neg_frame[1]));
    }

    Itinerary probe(std::size_t x, double theta) {
        return itinerary_of(flow_from(x, circle_offset(x, theta), FlowDirection::Down));
    }

    void sweep_maximum(std::size_t x) {
        const double two_pi = 2 * std::numbers::pi;
        std::vector<double> thetas;
        for (int i = 0; i < params_.circle_seeds; ++i) thetas.push_back(two_pi * (i + 0.5) / params_.circle_seeds);
        for (double t : targeted_[x])
            for (double delta : {-0.01, 0.01}) thetas.push_back(std::fmod(std::fmod(t + delta, two_pi) + two_pi, two_pi));
        std::sort(thetas.begin(), thetas.end());
        thetas.erase(std::unique(thetas.begin(), thetas.end(), [](double a, double b) { return b - a < 1e-12; }),
                     thetas.end());

        std::vector<Itinerary> its;
        for (double t : thetas) {
            auto tr = flow_from(x, circle_offset(x, t), FlowDirection::Down);
            if (!tr.terminal) {
                result_.unresolved = true;
                result_.diagnostics.push_back("trajectory from " + label(x) + " escaped");
            }
            its.push_back(itinerary_of(tr));
            result_.flows.push_back(std::move(tr));
        }
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            const std::size_t j = (i + 1) % thetas.size();
            const double b = j == 0 ? thetas[0] + two_pi : thetas[j];
            resolve(x, thetas[i], its[i], b, its[j]);
        }
    }

    void resolve(std::size_t x, double a, const Itinerary& ia, double b, const Itinerary& ib) {
        if (ia.same_sides(ib)) return;
        if (b - a > params_.bisection_tolerance) {
            const double m = 0.5 * (a + b);
            const Itinerary im = probe(x, m);
            if (!im.terminal) result_.unresolved = true;
            resolve(x, a, ia, m, im);
            resolve(x, m, im, b, ib);
            return;
        }
        // A side flip at an index-1 point y is a flow line into y when both ends
        // pass close to y; flips far from every point are artifacts of the
        // closest-approach bookkeeping. The earliest close flip is the crossing.
        const double rho = params_.passage_radius;
        std::optional<std::size_t> y;
        for (const auto& [j, pa] : ia.approaches) {
            const auto it = ib.approaches.find(j);
            if (it == ib.approaches.end()) continue;
            const auto& pb = it->second;
            if (pa.side == pb.side || std::max(pa.distance, pb.distance) >= rho) continue;
            if (!y || crits_[j].value > crits_[*y].value) y = j;
        }
        if (!y) {
            if (ia.terminal == ib.terminal) return;
            result_.unresolved = true;
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12f", a);
            result_.diagnostics.push_back("unresolved basin boundary on the circle of " + label(x) + " at theta " + buf);
            return;
        }
        for (const auto& [w, pa] : ia.approaches) {
            const auto it = ib.approaches.find(w);
            if (w == *y || it == ib.approaches.end() || crits_[w].value <= crits_[*y].value) continue;
            if (std::max(pa.distance, it->second.distance) < rho) {
                result_.diagnostics.push_back("broken trajectory from " + label(x) + " to " + label(*y) + " through " +
                                              label(w) + " (not counted)");
                return;
            }
        }
        auto& cell = cells_[{x, *y}];
        cell.integral += ib.approaches.at(*y).side;
        ++cell.lines;
    }
};

}  // namespace

IncidenceResult incidence_matrices(const Surface& s, const MorseFunctionSpec& f, const std::vector<CriticalPoint>& crits,
                                   const MorseParameters& params) {
    return IncidenceEngine(s, f, crits, params).run();
}

std::vector<std::size_t> MorseData::of_index(int k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i].index == k) out.push_back(i);
    return out;
}

MorseData symbolic_morse_data(std::vector<CriticalPoint> points, std::vector<IntegerMatrix> incidence, bool integral,
                              int dimension) {
    if (dimension < 0) throw std::invalid_argument("negative dimension");
    MorseData d;
    d.dimension = dimension;
    d.points = std::move(points);
    d.provenance = Provenance::Symbolic;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        if (d.points[i].index < 0 || d.points[i].index > dimension)
            throw std::invalid_argument("critical point " + d.points[i].label + " has index outside [0, dimension]");
        if (i > 0 && d.points[i].value < d.points[i - 1].value)
            throw std::invalid_argument("critical points must be sorted by value");
    }
    if (incidence.size() != static_cast<std::size_t>(dimension))
        throw std::invalid_argument("expected one incidence matrix per adjacent index pair");
    for (int k = 1; k <= dimension; ++k) {
        const auto& m = incidence[static_cast<std::size_t>(k - 1)];
        if (m.rows() != d.of_index(k - 1).size() || m.cols() != d.of_index(k).size())
            throw std::invalid_argument("incidence matrix " + std::to_string(k) + " -> " + std::to_string(k - 1) +
                                        " has the wrong shape");
        d.mod2.push_back(m.mod(2));
    }
    d.has_integral = integral;
    if (integral) d.integral = std::move(incidence);
    return d;
}

GradedFreeComplex build_morse_complex(const MorseData& d, Coefficients coeff) {
    const bool over_z2 = coeff.kind == Coefficients::Kind::Modular && coeff.modulus == 2;
    if (!over_z2 && !d.has_integral)
        throw std::invalid_argument("Morse data carries only mod-2 incidence; use Z2 coefficients");
    std::vector<std::vector<std::string>> gens;
    for (int k = 0; k <= d.dimension; ++k) {
        std::vector<std::string> l;
        for (std::size_t i : d.of_index(k)) l.push_back(d.points[i].label);
        gens.push_back(std::move(l));
    }
    auto x = GradedFreeComplex::from_degree_zero(std::move(gens), over_z2 ? d.mod2 : d.integral, over_z2 ? 2 : 0);
    const auto bad = verify_complex(x);
    if (!bad.empty())
        throw std::invalid_argument("defective incidence data: composed incidence is nonzero in degree " +
                                    std::to_string(bad.front()));
    return x;
}

std::vector<HomologyGroup> morse_homology(const MorseData& d, Coefficients coeff) {
    return homology(build_morse_complex(d, coeff), coeff);
}

MorseRun run_morse(const Surface& s, const MorseFunctionSpec& f, const MorseParameters& params) {
    MorseRun run;
    run.search = find_critical_points(s, f, params);
    run.incidence = incidence_matrices(s, f, run.search.points, params);
    run.data.dimension = 2;
    run.data.points = run.search.points;
    run.data.integral = run.incidence.integral;
    run.data.mod2 = run.incidence.mod2;
    run.data.has_integral = true;
    run.data.provenance = Provenance::Numerical;
    return run;
}

bool FiltrationReport::passes() const {
    if (reassembled != morse) return false;
    return std::all_of(levels.begin(), levels.end(),
                       [](const FiltrationLevel& l) { return l.matches && (!l.les_checked || l.les.exact()); });
}

FiltrationReport filtration_report(const MorseData& d, Coefficients coeff) {
    const GradedFreeComplex total = build_morse_complex(d, coeff);
    FiltrationReport rep;

    std::vector<int> level(d.points.size());
    std::vector<double> values;
    for (std::size_t i = 0; i < d.points.size(); ++i) {
        const double v = d.points[i].value;
        if (values.empty() || std::abs(v - values.back()) > 1e-9 * (1 + std::abs(v))) values.push_back(v);
        level[i] = static_cast<int>(values.size()) - 1;
    }
    std::vector<std::vector<std::size_t>> ids;  // per degree, point ids in generator order
    for (int k = 0; k <= d.dimension; ++k) ids.push_back(d.of_index(k));

    for (int k = 1; k <= d.dimension; ++k) {
        const auto m = total.boundary(k);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                if (m(r, c) != 0 && level[ids[static_cast<std::size_t>(k - 1)][r]] >= level[ids[static_cast<std::size_t>(k)][c]])
                    throw std::invalid_argument("incidence does not decrease the function value (" +
                                                d.points[ids[static_cast<std::size_t>(k)][c]].label + " -> " +
                                                d.points[ids[static_cast<std::size_t>(k - 1)][r]].label + ")");
    }

    // subcomplex (or subquotient) on the generators selected by `keep`; also returns positions
    auto restrict = [&](const std::function<bool(std::size_t)>& keep, std::vector<std::vector<long>>& pos) {
        std::vector<std::vector<std::string>> gens;
        std::vector<std::vector<std::size_t>> kept;
        pos.assign(ids.size(), {});
        for (std::size_t k = 0; k < ids.size(); ++k) {
            std::vector<std::string> l;
            std::vector<std::size_t> kk;
            for (std::size_t g = 0; g < ids[k].size(); ++g) {
                if (keep(ids[k][g])) {
                    pos[k].push_back(static_cast<long>(l.size()));
                    l.push_back(d.points[ids[k][g]].label);
                    kk.push_back(g);
                } else {
                    pos[k].push_back(-1);
                }
            }
            gens.push_back(std::move(l));
            kept.push_back(std::move(kk));
        }
        std::vector<IntegerMatrix> bnds;
        for (std::size_t k = 1; k < ids.size(); ++k) {
            const auto full = total.boundary(static_cast<int>(k));
            IntegerMatrix m(kept[k - 1].size(), kept[k].size());
            for (std::size_t r = 0; r < kept[k - 1].size(); ++r)
                for (std::size_t c = 0; c < kept[k].size(); ++c) m(r, c) = full(kept[k - 1][r], kept[k][c]);
            bnds.push_back(std::move(m));
        }
        return GradedFreeComplex::from_degree_zero(std::move(gens), std::move(bnds), total.modulus());
    };
    auto selection = [&](const std::vector<std::vector<long>>& from, const std::vector<std::vector<long>>& to,
                         const GradedFreeComplex& src, const GradedFreeComplex& tgt) {
        std::vector<IntegerMatrix> ms;
        for (std::size_t k = 0; k < ids.size(); ++k) {
            IntegerMatrix m(tgt.rank(static_cast<int>(k)), src.rank(static_cast<int>(k)));
            for (std::size_t g = 0; g < ids[k].size(); ++g)
                if (from[k][g] >= 0 && to[k][g] >= 0)
                    m(static_cast<std::size_t>(to[k][g]), static_cast<std::size_t>(from[k][g])) = 1;
            ms.push_back(std::move(m));
        }
        return ms;
    };

    const bool integral = total.modulus() == 0 && coeff.kind == Coefficients::Kind::Integers;
    GradedFreeComplex last;
    for (int j = 0; j < static_cast<int>(values.size()); ++j) {
        std::vector<std::vector<long>> pa, pb, pc;
        const auto a = restrict([&](std::size_t i) { return level[i] < j; }, pa);
        const auto b = restrict([&](std::size_t i) { return level[i] <= j; }, pb);
        const auto c = restrict([&](std::size_t i) { return level[i] == j; }, pc);
        FiltrationLevel lv;
        lv.value = values[static_cast<std::size_t>(j)];
        lv.counts.assign(ids.size(), 0);
        for (std::size_t i = 0; i < d.points.size(); ++i)
            if (level[i] == j) {
                lv.points.push_back(i);
                ++lv.counts[static_cast<std::size_t>(d.points[i].index)];
            }
        lv.relative = homology(c, coeff);
        lv.matches = true;
        for (const auto& h : lv.relative)
            if (h.betti != lv.counts[static_cast<std::size_t>(h.degree)] || !h.torsion.empty()) lv.matches = false;
        if (integral) {
            const ShortExactSequence ses{{a, b, 0, selection(pa, pb, a, b)}, {b, c, 0, selection(pb, pc, b, c)}};
            if (!verify_short_exact(ses).empty()) throw std::logic_error("filtration step is not a short exact sequence");
            lv.les = long_exact_sequence_check(ses);
            lv.les_checked = true;
        }
        rep.levels.push_back(std::move(lv));
        last = b;
    }
    rep.reassembled = homology(last, coeff);
    rep.morse = morse_homology(d, coeff);
    return rep;
}

std::string dump_flows(const std::vector<FlowTrajectory>& flows) {
    std::ostringstream out;
    bool first = true;
    for (const auto& t : flows) {
        if (!first) out << '\n';
        first = false;
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g %.12g\n", t.points[i][0], t.points[i][1], t.points[i][2],
                          t.values[i]);
            out << buf;
        }
    }
    return out.str();
}

}  // namespace cornerhom
