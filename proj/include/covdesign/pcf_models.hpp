#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "covdesign/design_spec.hpp"

namespace covdesign {

/// Midpoint discretization of the radial axis: m points r_j = (j - 1/2) * r_cut / m.
struct RadialGrid {
    double r_cut = 0.0;
    int m = 0;
    std::vector<double> points;

    double spacing() const { return r_cut / m; }
};

inline RadialGrid make_radial_grid(double r_cut, int m) {
    if (!(r_cut > 0.0)) throw std::invalid_argument("make_radial_grid: r_cut must be > 0");
    if (m < 1) throw std::invalid_argument("make_radial_grid: m must be >= 1");
    RadialGrid grid;
    grid.r_cut = r_cut;
    grid.m = m;
    grid.points.resize(m);
    const double h = r_cut / m;
    for (int j = 0; j < m; ++j) grid.points[j] = (j + 0.5) * h;
    return grid;
}

enum class PcfFamily { kPds, kSfsd, kProposed };

inline const char* family_name(PcfFamily family) {
    switch (family) {
    case PcfFamily::kPds: return "pds";
    case PcfFamily::kSfsd: return "sfsd";
    default: return "proposed";
    }
}

/// One member of the coverage-based design family.
///
/// amplitude/decay/frequency/phase shape the damped-oscillation segment and
/// are ignored for kPds and kSfsd; r_1 and p0 are ignored for kPds.
struct PcfParams {
    PcfFamily family = PcfFamily::kProposed;
    double r_min = 0.0;
    double r_1 = 0.0;
    double p0 = 1.0;
    double amplitude = 0.5; // oscillation amplitude a
    double decay = 4.0;     // exponential decay rate b
    double frequency = 300.0; // oscillation frequency c, cycles per unit length
    double phase = 0.0;     // phase offset d
};

inline void validate(const PcfParams& params) {
    if (!(params.r_min > 0.0))
        throw std::invalid_argument("PcfParams: r_min must be > 0");
    if (params.family == PcfFamily::kPds) return;
    if (params.r_1 < params.r_min)
        throw std::invalid_argument("PcfParams: r_1 must be >= r_min");
    if (params.p0 < 1.0)
        throw std::invalid_argument("PcfParams: p0 must be >= 1");
    if (params.family == PcfFamily::kSfsd) return;
    if (params.amplitude < 0.0)
        throw std::invalid_argument("PcfParams: amplitude must be >= 0");
    if (params.decay < 0.0)
        throw std::invalid_argument("PcfParams: decay must be >= 0");
}

/// Closed-form damped-oscillation continuation of a PCF beyond `start`:
/// G(r) = 1 + (amplitude / r) exp(-decay r) sin(2 pi frequency r + phase).
struct PcfTail {
    double start = 0.0;
    double amplitude = 0.0;
    double decay = 0.0;
    double frequency = 0.0;
    double phase = 0.0;

    double deviation(double r) const {
        return amplitude / r * std::exp(-decay * r) *
               std::sin(2.0 * std::numbers::pi * frequency * r + phase);
    }

    /// Radius beyond which the tail envelope (amplitude/r) exp(-decay r)
    /// stays below eps; used to truncate spectral integrals.
    double extent(double eps) const {
        if (amplitude <= 0.0) return start;
        double r = std::max(start, 1e-12);
        while (amplitude / r * std::exp(-decay * r) > eps) {
            r *= 1.25;
            if (r > 1e6) break;
        }
        return r;
    }
};

/// Discretized G(r) on a radial grid.
///
/// Profiles built from the model families also carry their defining closed
/// form, jump locations, and (for the proposed family) the analytic tail so
/// spectral quadratures can sample the exact function instead of the grid.
struct RadialProfile {
    RadialGrid grid;
    std::vector<double> values;
    std::function<double(double)> analytic;
    std::vector<double> breakpoints;
    std::optional<PcfTail> tail;

    /// G(r) anywhere: the closed form if present, otherwise linear
    /// interpolation with constant extension outside the grid.
    double operator()(double r) const {
        if (analytic) return analytic(r);
        if (values.empty()) return 0.0;
        if (r <= grid.points.front()) return values.front();
        if (r >= grid.points.back()) return values.back();
        const double h = grid.spacing();
        const double pos = (r - grid.points.front()) / h;
        const auto j = static_cast<std::size_t>(pos);
        const double w = pos - static_cast<double>(j);
        return values[j] * (1.0 - w) + values[j + 1] * w;
    }
};

inline void validate(const RadialProfile& profile) {
    if (profile.values.size() != static_cast<std::size_t>(profile.grid.m))
        throw std::invalid_argument("RadialProfile: values/grid size mismatch");
    for (double v : profile.values)
        if (v < 0.0)
            throw std::invalid_argument("RadialProfile: negative PCF value");
}

/// Step PCF of Poisson disk sampling: 0 below r_min, 1 at and above it.
inline RadialProfile pcf_pds(double r_min, const RadialGrid& grid) {
    if (!(r_min > 0.0)) throw std::invalid_argument("pcf_pds: r_min must be > 0");
    RadialProfile profile;
    profile.grid = grid;
    profile.values.resize(grid.points.size());
    profile.analytic = [r_min](double r) { return r < r_min ? 0.0 : 1.0; };
    profile.breakpoints = {r_min};
    for (std::size_t j = 0; j < grid.points.size(); ++j)
        profile.values[j] = profile.analytic(grid.points[j]);
    return profile;
}

/// Stair PCF: 0 on [0, r_min], p0 on (r_min, r_1], 1 beyond. Note the step
/// convention differs from pcf_pds at r_min itself (0 here, 1 there).
inline RadialProfile pcf_sfsd(const PcfParams& params, const RadialGrid& grid) {
    PcfParams checked = params;
    checked.family = PcfFamily::kSfsd;
    validate(checked);
    RadialProfile profile;
    profile.grid = grid;
    profile.values.resize(grid.points.size());
    const double r_min = params.r_min;
    const double r_1 = params.r_1;
    const double p0 = params.p0;
    profile.analytic = [r_min, r_1, p0](double r) {
        if (r <= r_min) return 0.0;
        if (r <= r_1) return p0;
        return 1.0;
    };
    profile.breakpoints = {r_min, r_1};
    for (std::size_t j = 0; j < grid.points.size(); ++j)
        profile.values[j] = profile.analytic(grid.points[j]);
    return profile;
}

/// Stair PCF with a damped-oscillation segment beyond r_1:
/// G(r) = 1 + (a/r) exp(-b r) sin(2 pi c r + d) for r > r_1.
/// Parameter sets whose oscillation drives G below zero anywhere on the
/// grid are rejected.
inline RadialProfile pcf_proposed(const PcfParams& params, const RadialGrid& grid) {
    PcfParams checked = params;
    checked.family = PcfFamily::kProposed;
    validate(checked);
    RadialProfile profile;
    profile.grid = grid;
    profile.values.resize(grid.points.size());
    PcfTail tail;
    tail.start = params.r_1;
    tail.amplitude = params.amplitude;
    tail.decay = params.decay;
    tail.frequency = params.frequency;
    tail.phase = params.phase;
    const double r_min = params.r_min;
    const double r_1 = params.r_1;
    const double p0 = params.p0;
    profile.analytic = [r_min, r_1, p0, tail](double r) {
        if (r <= r_min) return 0.0;
        if (r <= r_1) return p0;
        return 1.0 + tail.deviation(r);
    };
    profile.breakpoints = {r_min, r_1};
    profile.tail = tail;
    for (std::size_t j = 0; j < grid.points.size(); ++j) {
        const double value = profile.analytic(grid.points[j]);
        if (value < 0.0)
            throw std::invalid_argument(
                "pcf_proposed: oscillation drives G(r) negative on the grid");
        profile.values[j] = value;
    }
    return profile;
}

/// Evaluate one family on a grid, dispatching on params.family.
inline RadialProfile pcf_profile(const PcfParams& params, const RadialGrid& grid) {
    switch (params.family) {
    case PcfFamily::kPds: return pcf_pds(params.r_min, grid);
    case PcfFamily::kSfsd: return pcf_sfsd(params, grid);
    default: return pcf_proposed(params, grid);
    }
}

/// Default target grid for a design spec: r_cut = 3 * reference radius,
/// 200 midpoints. Covers the stair peak plus several oscillation periods
/// while keeping the synthesis loop tractable.
inline RadialGrid default_radial_grid(const DesignSpec& spec, int m = 200) {
    return make_radial_grid(3.0 * reference_radius(spec), m);
}

} // namespace covdesign
