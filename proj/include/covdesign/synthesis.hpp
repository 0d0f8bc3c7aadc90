#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "covdesign/design_spec.hpp"
#include "covdesign/errors.hpp"
#include "covdesign/pcf_models.hpp"
#include "covdesign/point_set.hpp"
#include "covdesign/rng.hpp"

namespace covdesign {

/// Kernel estimator configuration. The window is the unit cube: volume 1,
/// surface area 2d. A non-positive sigma selects the default bandwidth of
/// a quarter of the radial grid spacing.
struct EstimatorConfig {
    double sigma = -1.0;
    double v_w = 1.0;
    double s_w = 0.0; // filled from the dimension when zero
};

enum class Schedule { kAlr, kClr };

struct SynthesisConfig {
    int t_max = 1000;
    Schedule schedule = Schedule::kAlr;
    double clr_rate = 0.01;
    std::uint64_t seed = 0;
    EstimatorConfig estimator;
    int full_refresh_every = 50; // periodic full estimator recomputation
};

/// Per-iteration PCF-matching objective, plus the same sum restricted to
/// the coverage region (grid points where the target is zero). The initial
/// fields hold the values of the random starting configuration.
struct SynthesisTrace {
    std::vector<double> objective;
    std::vector<double> coverage_objective;
    double initial_objective = 0.0;
    double initial_coverage_objective = 0.0;
};

/// Learning rate of the adaptive schedule at iteration t (1-based).
inline double alr_rate(int t) { return 0.1 * std::exp(-0.1 * std::sqrt(static_cast<double>(t))); }

namespace detail {

// Gaussian kernel k(z) = exp(-z^2 / sigma^2) / (sqrt(pi) sigma), truncated
// at |z| > 4 sigma.
struct Kernel {
    double sigma = 0.0;
    double inv_sigma_sq = 0.0;
    double norm = 0.0;
    double reach = 0.0;

    explicit Kernel(double s)
        : sigma(s),
          inv_sigma_sq(1.0 / (s * s)),
          norm(1.0 / (std::sqrt(std::numbers::pi) * s)),
          reach(4.0 * s) {}

    double value(double z) const {
        if (std::abs(z) > reach) return 0.0;
        return norm * std::exp(-z * z * inv_sigma_sq);
    }
    // d/dz of value
    double derivative(double z) const {
        if (std::abs(z) > reach) return 0.0;
        return -2.0 * z * inv_sigma_sq * norm * std::exp(-z * z * inv_sigma_sq);
    }
};

// Surface area of the (d-1)-sphere of radius r.
inline double sphere_surface(int d, double r) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) *
           std::pow(r, d - 1) / std::tgamma(0.5 * d);
}

// Isotropized set covariance of the unit cube, linear approximation with
// the documented clamp at 0.1 V_W.
inline double window_covariance(double v_w, double s_w, double r) {
    return std::max(v_w - s_w / std::numbers::pi * r, 0.1 * v_w);
}

// Uniform bucket grid over the unit cube for neighbor queries.
class CellList {
public:
    CellList(int d, double reach, int n_hint) : d_(d) {
        per_axis_ = static_cast<int>(std::floor(1.0 / std::max(reach, 1e-9)));
        per_axis_ = std::clamp(per_axis_, 1, 64);
        // avoid pathological bucket counts in high dimension
        while (std::pow(per_axis_, d_) > 8.0 * std::max(n_hint, 1) && per_axis_ > 1)
            --per_axis_;
        total_ = 1;
        for (int p = 0; p < d_; ++p) total_ *= per_axis_;
        buckets_.assign(total_, {});
    }

    int bucket_of(const double* x) const {
        int idx = 0;
        for (int p = 0; p < d_; ++p) {
            int c = static_cast<int>(x[p] * per_axis_);
            c = std::clamp(c, 0, per_axis_ - 1);
            idx = idx * per_axis_ + c;
        }
        return idx;
    }

    void insert(int point, const double* x) { buckets_[bucket_of(x)].push_back(point); }

    void remove(int point, const double* x) {
        auto& bucket = buckets_[bucket_of(x)];
        bucket.erase(std::find(bucket.begin(), bucket.end(), point));
    }

    // visit all points in the 3^d neighborhood of x (every bucket when the
    // grid is too coarse to discriminate)
    template <class Fn>
    void for_neighbors(const double* x, Fn&& fn) const {
        if (per_axis_ < 3) {
            for (const auto& bucket : buckets_)
                for (int p : bucket) fn(p);
            return;
        }
        std::array<int, 8> base{};
        for (int p = 0; p < d_; ++p) {
            int c = static_cast<int>(x[p] * per_axis_);
            base[p] = std::clamp(c, 0, per_axis_ - 1);
        }
        std::array<int, 8> offset{};
        offset.fill(-1);
        for (;;) {
            bool valid = true;
            int idx = 0;
            for (int p = 0; p < d_; ++p) {
                const int c = base[p] + offset[p];
                if (c < 0 || c >= per_axis_) {
                    valid = false;
                    break;
                }
                idx = idx * per_axis_ + c;
            }
            if (valid)
                for (int q : buckets_[idx]) fn(q);
            int p = d_ - 1;
            for (; p >= 0; --p) {
                if (++offset[p] <= 1) break;
                offset[p] = -1;
            }
            if (p < 0) break;
        }
    }

private:
    int d_;
    int per_axis_ = 1;
    int total_ = 1;
    std::vector<std::vector<int>> buckets_;
};

// Shared engine behind estimate_pcf, pcf_gradient and synthesize: kernel
// sums per grid point with incremental updates as points move.
class EstimatorState {
public:
    EstimatorState(const PointSet& points, const RadialGrid& grid,
                   const EstimatorConfig& cfg)
        : points_(points),
          grid_(grid),
          kernel_(cfg.sigma > 0.0 ? cfg.sigma : 0.25 * grid.spacing()),
          cells_(points.d, grid.r_cut + 4.0 * (cfg.sigma > 0.0 ? cfg.sigma
                                                               : 0.25 * grid.spacing()),
                 points.n) {
        if (points_.n < 2)
            throw std::invalid_argument("estimate_pcf: need at least 2 points");
        v_w_ = cfg.v_w;
        s_w_ = cfg.s_w > 0.0 ? cfg.s_w : 2.0 * points.d;
        reach_ = grid_.r_cut + kernel_.reach;
        prefactor_.resize(grid_.m);
        for (int j = 0; j < grid_.m; ++j) {
            const double r = grid_.points[j];
            prefactor_[j] = v_w_ / window_covariance(v_w_, s_w_, r) *
                            (v_w_ / points_.n) /
                            (sphere_surface(points_.d, r) * (points_.n - 1));
        }
        for (int i = 0; i < points_.n; ++i) cells_.insert(i, points_.point(i));
        rebuild();
    }

    const RadialGrid& grid() const { return grid_; }
    const Kernel& kernel() const { return kernel_; }
    const PointSet& points() const { return points_; }

    /// True where the window covariance clamp was active.
    bool clamped_at(int j) const {
        return window_covariance(v_w_, s_w_, grid_.points[j]) == 0.1 * v_w_;
    }

    double estimate(int j) const { return prefactor_[j] * kernel_sums_[j]; }

    double objective(const std::vector<double>& target) const {
        double total = 0.0;
        for (int j = 0; j < grid_.m; ++j) {
            const double diff = estimate(j) - target[j];
            total += diff * diff;
        }
        return total;
    }

    double coverage_objective(const std::vector<double>& target) const {
        double total = 0.0;
        for (int j = 0; j < grid_.m; ++j) {
            if (target[j] != 0.0) continue;
            const double diff = estimate(j) - target[j];
            total += diff * diff;
        }
        return total;
    }

    enum class GradientScope { kFull, kCoverageOnly };

    /// Analytic gradient of the squared-error objective with respect to the
    /// coordinates of point i. Pairs at zero distance contribute nothing.
    /// kCoverageOnly restricts the sum to grid points where the target
    /// vanishes (the disk-constraint region).
    std::vector<double> gradient(int i, const std::vector<double>& target,
                                 GradientScope scope = GradientScope::kFull) const {
        std::vector<double> grad(points_.d, 0.0);
        const double* xi = points_.point(i);
        cells_.for_neighbors(xi, [&](int b) {
            if (b == i) return;
            const double dist = covdesign::distance(points_, i, b);
            if (dist == 0.0 || dist > reach_) return;
            double weight = 0.0;
            visit_bins(dist, [&](int j, double z) {
                if (scope == GradientScope::kCoverageOnly && target[j] != 0.0)
                    return;
                // dF/dD for this pair: 2 (Ghat - G*) C_j * 2 * dk/dD,
                // dk/dD = -k'(r_j - D)
                weight += -4.0 * (estimate(j) - target[j]) * prefactor_[j] *
                          kernel_.derivative(z);
            });
            const double* xb = points_.point(b);
            for (int p = 0; p < points_.d; ++p)
                grad[p] += weight * (xi[p] - xb[p]) / dist;
        });
        return grad;
    }

    /// Distance from point i to its nearest neighbor within the query
    /// reach; +inf when nothing is that close.
    double nearest_distance(int i) const {
        double best = std::numeric_limits<double>::infinity();
        cells_.for_neighbors(points_.point(i), [&](int b) {
            if (b == i) return;
            best = std::min(best, covdesign::distance(points_, i, b));
        });
        return best;
    }

    /// Net unit-sum repulsion away from neighbors closer than `radius`.
    /// Zero when the disk constraint holds at point i (or only coincident
    /// pairs violate it, whose direction is undefined).
    std::vector<double> repulsion(int i, double radius) const {
        std::vector<double> dir(points_.d, 0.0);
        const double* xi = points_.point(i);
        cells_.for_neighbors(xi, [&](int b) {
            if (b == i) return;
            const double dist = covdesign::distance(points_, i, b);
            if (dist == 0.0 || dist >= radius) return;
            const double* xb = points_.point(b);
            for (int p = 0; p < points_.d; ++p)
                dir[p] += (xi[p] - xb[p]) / dist;
        });
        return dir;
    }

    /// Move point i to new coordinates, updating the kernel sums for the
    /// pairs that involve it.
    void move(int i, const double* next) {
        const double* xi = points_.point(i);
        cells_.for_neighbors(xi, [&](int b) {
            if (b == i) return;
            const double dist = covdesign::distance(points_, i, b);
            if (dist > reach_) return;
            visit_bins(dist,
                       [&](int j, double z) { kernel_sums_[j] -= 2.0 * kernel_.value(z); });
        });
        cells_.remove(i, xi);
        for (int p = 0; p < points_.d; ++p) points_.at(i, p) = next[p];
        cells_.insert(i, points_.point(i));
        cells_.for_neighbors(points_.point(i), [&](int b) {
            if (b == i) return;
            const double dist = covdesign::distance(points_, i, b);
            if (dist > reach_) return;
            visit_bins(dist,
                       [&](int j, double z) { kernel_sums_[j] += 2.0 * kernel_.value(z); });
        });
    }

    /// Recompute all kernel sums from scratch (caps incremental drift).
    void rebuild() {
        kernel_sums_.assign(grid_.m, 0.0);
        for (int i = 0; i < points_.n; ++i) {
            for (int b = i + 1; b < points_.n; ++b) {
                const double dist = covdesign::distance(points_, i, b);
                if (dist > reach_) continue;
                visit_bins(dist, [&](int j, double z) {
                    kernel_sums_[j] += 2.0 * kernel_.value(z);
                });
            }
        }
    }

private:
    template <class Fn>
    void visit_bins(double dist, Fn&& fn) const {
        const double h = grid_.spacing();
        const double lo = (dist - kernel_.reach) / h - 0.5;
        const double hi = (dist + kernel_.reach) / h - 0.5;
        int j_lo = static_cast<int>(std::ceil(lo));
        int j_hi = static_cast<int>(std::floor(hi));
        j_lo = std::max(j_lo, 0);
        j_hi = std::min(j_hi, grid_.m - 1);
        for (int j = j_lo; j <= j_hi; ++j) fn(j, grid_.points[j] - dist);
    }

    PointSet points_;
    RadialGrid grid_;
    Kernel kernel_;
    CellList cells_;
    double reach_ = 0.0;
    double v_w_ = 1.0;
    double s_w_ = 0.0;
    std::vector<double> prefactor_;
    std::vector<double> kernel_sums_;
};

} // namespace detail

/// Kernel density estimate of the pair correlation function (edge-corrected
/// for the unit cube). Grid points where the window-covariance clamp was
/// active are reported through `clamped` when provided.
inline RadialProfile estimate_pcf(const PointSet& points, const RadialGrid& grid,
                                  const EstimatorConfig& cfg = {},
                                  std::vector<int>* clamped = nullptr) {
    detail::EstimatorState state(points, grid, cfg);
    RadialProfile profile;
    profile.grid = grid;
    profile.values.resize(grid.m);
    for (int j = 0; j < grid.m; ++j) profile.values[j] = state.estimate(j);
    if (clamped) {
        clamped->clear();
        for (int j = 0; j < grid.m; ++j)
            if (state.clamped_at(j)) clamped->push_back(j);
    }
    return profile;
}

/// Analytic gradient of sum_j (Ghat(r_j) - G*(r_j))^2 with respect to the
/// coordinates of one point.
inline std::vector<double> pcf_gradient(const PointSet& points, int i,
                                        const RadialProfile& target,
                                        const EstimatorConfig& cfg = {}) {
    if (i < 0 || i >= points.n)
        throw std::invalid_argument("pcf_gradient: point index out of range");
    detail::EstimatorState state(points, target.grid, cfg);
    return state.gradient(i, target.values);
}

/// PCF-matching gradient descent (adaptive or constant learning rate).
///
/// Points start uniform at the configured seed. Each iteration sweeps the
/// points in order: the objective gradient is normalized to a unit step of
/// length lambda(t), positions are clamped to the cube, and the estimator
/// refreshes incrementally after every move (full recomputation every
/// full_refresh_every iterations).
///
/// Coverage is optimized before oscillations: while a point has neighbors
/// inside the target's zero region it takes its unit step directly away
/// from them, and only points satisfying the disk constraint descend the
/// matching objective. Jointly descending the full objective from the start
/// lets isolated close pairs freeze well short of the target radius.
///
/// The default synthesis bandwidth is two grid spacings; the quarter-spacing
/// estimation default leaves the discretized objective too spiky for stable
/// descent.
inline std::pair<PointSet, SynthesisTrace> synthesize(const RadialProfile& target,
                                                      const DesignSpec& spec,
                                                      const SynthesisConfig& cfg) {
    validate(spec);
    validate(target);
    if (cfg.t_max < 1)
        throw std::invalid_argument("synthesize: t_max must be >= 1");
    if (cfg.schedule == Schedule::kClr && !(cfg.clr_rate > 0.0))
        throw std::invalid_argument("synthesize: clr_rate must be > 0");

    PointSet points;
    points.n = spec.n;
    points.d = spec.d;
    points.coords.resize(static_cast<std::size_t>(spec.n) * spec.d);
    Rng rng(cfg.seed);
    for (auto& c : points.coords) c = rng.uniform();
    points.meta.method = "synthesized";
    points.meta.seed = cfg.seed;

    EstimatorConfig est_cfg = cfg.estimator;
    if (est_cfg.sigma <= 0.0) est_cfg.sigma = 2.0 * target.grid.spacing();
    detail::EstimatorState state(points, target.grid, est_cfg);
    SynthesisTrace trace;
    trace.objective.reserve(cfg.t_max);
    trace.coverage_objective.reserve(cfg.t_max);
    trace.initial_objective = state.objective(target.values);
    trace.initial_coverage_objective = state.coverage_objective(target.values);

    // extent of the target's zero region: the disk radius as the grid
    // resolves it
    double r_zero = 0.0;
    for (int j = 0; j < target.grid.m; ++j)
        if (target.values[j] == 0.0) r_zero = target.grid.points[j];

    std::vector<double> next(spec.d);
    for (int t = 1; t <= cfg.t_max; ++t) {
        const double rate = cfg.schedule == Schedule::kAlr ? alr_rate(t) : cfg.clr_rate;
        for (int i = 0; i < spec.n; ++i) {
            std::vector<double> step =
                r_zero > 0.0 ? state.repulsion(i, r_zero) : std::vector<double>();
            bool ascending = false; // repulsion moves along +step
            double norm_sq = 0.0;
            for (double g : step) norm_sq += g * g;
            if (norm_sq > 0.0) {
                ascending = true;
            } else {
                step = state.gradient(i, target.values);
                norm_sq = 0.0;
                for (double g : step) norm_sq += g * g;
            }
            if (norm_sq == 0.0) continue; // stationary point: skip this point
            const double scale =
                (ascending ? rate : -rate) / std::sqrt(norm_sq);
            const double* xi = state.points().point(i);
            for (int p = 0; p < spec.d; ++p)
                next[p] = std::clamp(xi[p] + scale * step[p], 0.0, 1.0);
            state.move(i, next.data());
        }
        if (cfg.full_refresh_every > 0 && t % cfg.full_refresh_every == 0)
            state.rebuild();
        trace.objective.push_back(state.objective(target.values));
        trace.coverage_objective.push_back(state.coverage_objective(target.values));
    }

    PointSet result = state.points();
    result.meta.method = "synthesized";
    result.meta.seed = cfg.seed;
    return {result, trace};
}

/// Rejection-sampled Poisson disk set: uniform candidates are accepted only
/// at distance >= r_min from every accepted point. Throws partial_design_error
/// (carrying the achieved count) when max_failures consecutive candidates
/// are rejected before reaching N.
inline PointSet dart_throwing(double r_min, const DesignSpec& spec,
                              int max_failures, std::uint64_t seed) {
    validate(spec);
    if (r_min < 0.0)
        throw std::invalid_argument("dart_throwing: r_min must be >= 0");
    if (max_failures < 1)
        throw std::invalid_argument("dart_throwing: max_failures must be >= 1");

    PointSet points;
    points.d = spec.d;
    points.meta.method = "pds-dart";
    points.meta.seed = seed;
    points.coords.reserve(static_cast<std::size_t>(spec.n) * spec.d);

    detail::CellList cells(spec.d, std::max(r_min, 1e-9), spec.n);
    Rng rng(seed);
    std::vector<double> candidate(spec.d);
    int failures = 0;
    while (points.n < spec.n) {
        for (int p = 0; p < spec.d; ++p) candidate[p] = rng.uniform();
        bool ok = true;
        if (r_min > 0.0) {
            cells.for_neighbors(candidate.data(), [&](int b) {
                if (!ok) return;
                double sq = 0.0;
                for (int p = 0; p < spec.d; ++p) {
                    const double diff = candidate[p] - points.at(b, p);
                    sq += diff * diff;
                }
                if (sq < r_min * r_min) ok = false;
            });
        }
        if (ok) {
            points.coords.insert(points.coords.end(), candidate.begin(),
                                 candidate.end());
            cells.insert(points.n, candidate.data());
            ++points.n;
            failures = 0;
        } else if (++failures >= max_failures) {
            throw partial_design_error("dart_throwing: rejection budget exhausted",
                                       points.n);
        }
    }
    return points;
}

} // namespace covdesign
