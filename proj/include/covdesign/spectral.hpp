#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "covdesign/bessel.hpp"
#include "covdesign/design_spec.hpp"
#include "covdesign/pcf_models.hpp"
#include "covdesign/point_set.hpp"
#include "covdesign/rng.hpp"

namespace covdesign {

/// Uniformly spaced frequency grid, endpoints included.
struct SpectralGrid {
    double k_min = 0.0;
    double k_max = 0.0;
    int m_k = 0;
    std::vector<double> points;
};

inline SpectralGrid make_spectral_grid(double k_min, double k_max, int m_k) {
    if (!(k_min > 0.0) || !(k_max > k_min))
        throw std::invalid_argument("make_spectral_grid: need 0 < k_min < k_max");
    if (m_k < 2) throw std::invalid_argument("make_spectral_grid: m_k must be >= 2");
    SpectralGrid grid;
    grid.k_min = k_min;
    grid.k_max = k_max;
    grid.m_k = m_k;
    grid.points.resize(m_k);
    const double step = (k_max - k_min) / (m_k - 1);
    for (int j = 0; j < m_k; ++j) grid.points[j] = k_min + j * step;
    return grid;
}

/// Default frequency window: [1, 10 / reference_radius]. Frequencies below
/// one are sub-domain scales on a unit-volume region; the upper end covers
/// ten disk-scale harmonics.
inline SpectralGrid default_spectral_grid(const DesignSpec& spec, int m_k = 1000) {
    return make_spectral_grid(1.0, 10.0 / reference_radius(spec), m_k);
}

/// Discretized radially-averaged power spectral density P(k).
struct SpectrumProfile {
    SpectralGrid grid;
    std::vector<double> values;
};

struct RealizabilityReport {
    bool feasible = false;
    double min_power = 0.0;
    double argmin_k = 0.0;
};

inline constexpr double kRealizabilityTolerance = 1e-6;
inline constexpr double kTailTruncationEps = 1e-6;

namespace detail {

/// r^(n/2) for n in 0..8 without the libm pow cost.
inline double half_power(double r, int n) {
    switch (n) {
    case 0: return 1.0;
    case 1: return std::sqrt(r);
    case 2: return r;
    case 3: return r * std::sqrt(r);
    case 4: return r * r;
    case 5: return (r * r) * std::sqrt(r);
    case 6: return (r * r) * r;
    case 7: return ((r * r) * r) * std::sqrt(r);
    default: return (r * r) * (r * r);
    }
}

/// Composite Simpson with a fixed left-to-right summation order.
template <class F>
double simpson(F&& f, double a, double b, int subintervals) {
    const double h = (b - a) / subintervals;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < subintervals; ++i) {
        const double x = a + i * h;
        if (i & 1)
            odd += f(x);
        else
            even += f(x);
    }
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

/// Subinterval count resolving an oscillation of angular frequency `omega`
/// over [a, b] with `per_osc` nodes per period (rounded up to even).
inline int oscillation_subintervals(double a, double b, double omega, int per_osc,
                                    int minimum) {
    const double periods = (b - a) * omega / (2.0 * std::numbers::pi);
    double n = std::ceil(periods * per_osc);
    n = std::max(n, static_cast<double>(minimum));
    n = std::min(n, 4.0e6);
    int s = static_cast<int>(n);
    return s + (s & 1);
}

inline constexpr int kNodesPerOscillation = 32;
inline constexpr int kMinSubintervals = 48;

/// Integrate w(r) * J_order(k r) over [a, b], refining against the Bessel
/// oscillation plus an optional extra angular frequency carried by w.
template <class F>
double bessel_segment(const BesselJ& bessel, double k, F&& w, double a, double b,
                      double extra_omega = 0.0) {
    if (b <= a) return 0.0;
    const int n = oscillation_subintervals(a, b, k + extra_omega,
                                           kNodesPerOscillation, kMinSubintervals);
    return simpson([&](double r) { return w(r) * bessel(k * r); }, a, b, n);
}

/// Piecewise description of the bracket integrand r^(nu+1) (G(r) - 1):
/// segment boundaries within the profile body plus the analytic tail.
struct PsdIntegrand {
    std::vector<double> cuts; // ascending, first is 0
    const RadialProfile* profile = nullptr;
    double power = 0.0; // nu + 1 = d/2
    std::optional<PcfTail> tail;
    double tail_end = 0.0;
};

inline PsdIntegrand make_psd_integrand(const RadialProfile& profile, int d) {
    PsdIntegrand integrand;
    integrand.profile = &profile;
    integrand.power = 0.5 * d;
    double body_end;
    if (profile.analytic && !profile.breakpoints.empty()) {
        // model families: G is exactly 1 beyond the last breakpoint unless a
        // closed-form tail continues it
        body_end = profile.breakpoints.back();
    } else {
        body_end = profile.grid.r_cut;
    }
    integrand.cuts.push_back(0.0);
    for (double cut : profile.breakpoints)
        if (cut > 0.0 && cut < body_end) integrand.cuts.push_back(cut);
    integrand.cuts.push_back(body_end);
    if (profile.tail && profile.tail->amplitude > 0.0) {
        integrand.tail = profile.tail;
        integrand.tail_end = profile.tail->extent(kTailTruncationEps);
    }
    return integrand;
}

/// H_nu[r^nu (G - 1)](k) for one frequency.
inline double psd_bracket_transform(const PsdIntegrand& integrand,
                                    const BesselJ& bessel, double k) {
    const RadialProfile& profile = *integrand.profile;
    const double power = integrand.power;
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < integrand.cuts.size(); ++s) {
        const double a = integrand.cuts[s];
        const double b = integrand.cuts[s + 1];
        // open-interval sampling keeps step profiles exact within a segment
        const double mid_shift = 1e-9 * (b - a);
        const int twice_power = static_cast<int>(2.0 * power);
        auto w = [&](double r) {
            const double rr = std::clamp(r, a + mid_shift, b - mid_shift);
            return half_power(rr, twice_power) * (profile(rr) - 1.0);
        };
        double extra = 0.0;
        if (!profile.analytic) extra = 2.0 * std::numbers::pi / profile.grid.spacing();
        total += bessel_segment(bessel, k, w, a, b, extra);
    }
    if (integrand.tail) {
        const PcfTail& tail = *integrand.tail;
        const double a = tail.start;
        const double b = integrand.tail_end;
        const int twice_power = static_cast<int>(2.0 * power);
        auto w = [&](double r) {
            return half_power(r, twice_power) * tail.deviation(r);
        };
        const double osc = 2.0 * std::numbers::pi * tail.frequency;
        total += bessel_segment(bessel, k, w, a, b, osc);
    }
    return total;
}

template <class Fn>
void parallel_for_index(int count, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = static_cast<int>(std::min<unsigned>(hw, 8));
    if (workers < 2 || count < 4 * workers) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace detail

/// Numerical Hankel transform of a radial profile:
/// integral of r J_order(k r) f(r) dr over [0, r_upper].
/// The profile's closed form is sampled when available, otherwise the
/// gridded values are linearly interpolated.
inline double hankel_transform(const RadialProfile& profile, double order, double k,
                               double r_upper) {
    if (!(k > 0.0)) throw std::invalid_argument("hankel_transform: k must be > 0");
    if (r_upper < profile.grid.r_cut)
        throw std::invalid_argument("hankel_transform: r_upper below profile extent");
    const BesselJ bessel(order);
    std::vector<double> cuts{0.0};
    for (double cut : profile.breakpoints)
        if (cut > 0.0 && cut < r_upper) cuts.push_back(cut);
    cuts.push_back(r_upper);
    double total = 0.0;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double a = cuts[s];
        const double b = cuts[s + 1];
        const double mid_shift = 1e-9 * (b - a);
        auto w = [&](double r) {
            const double rr = std::clamp(r, a + mid_shift, b - mid_shift);
            return rr * profile(rr);
        };
        double extra = 0.0;
        if (!profile.analytic) extra = 2.0 * std::numbers::pi / profile.grid.spacing();
        if (profile.tail && b > profile.tail->start)
            extra = std::max(extra, 2.0 * std::numbers::pi * profile.tail->frequency);
        total += detail::bessel_segment(bessel, k, w, a, b, extra);
    }
    return total;
}

/// PCF -> PSD via the spectral link:
/// P(k) = 1 + N (2 pi)^(d/2) k^(1 - d/2) H_(d/2-1)[ r^(d/2-1) (G(r) - 1) ](k).
///
/// The bracket integrand vanishes wherever G = 1, so step and stair profiles
/// integrate over their support only; a damped-oscillation tail is carried
/// out to the radius where its envelope falls below 1e-6.
inline SpectrumProfile pcf_to_psd(const RadialProfile& profile, int n, int d,
                                  const SpectralGrid& k_grid) {
    if (d < 2 || d > 8) throw std::invalid_argument("pcf_to_psd: d must be in 2..8");
    if (n < 2) throw std::invalid_argument("pcf_to_psd: n must be >= 2");
    validate(profile);
    const double nu = 0.5 * d - 1.0;
    const BesselJ bessel(nu);
    const auto integrand = detail::make_psd_integrand(profile, d);
    const double prefactor = n * std::pow(2.0 * std::numbers::pi, 0.5 * d);
    SpectrumProfile spectrum;
    spectrum.grid = k_grid;
    spectrum.values.assign(k_grid.points.size(), 0.0);
    detail::parallel_for_index(static_cast<int>(k_grid.points.size()), [&](int j) {
        const double k = k_grid.points[j];
        const double transform = detail::psd_bracket_transform(integrand, bessel, k);
        spectrum.values[j] = 1.0 + prefactor * std::pow(k, 1.0 - 0.5 * d) * transform;
    });
    return spectrum;
}

/// Empirical PSD along explicit unit directions:
/// for each k, mean over directions of |sum_j exp(-2 pi i k u . x_j)|^2 / N.
inline SpectrumProfile empirical_psd_directions(
    const PointSet& points, const SpectralGrid& k_grid,
    const std::vector<std::vector<double>>& directions) {
    if (points.n < 1)
        throw std::invalid_argument("empirical_psd: empty point set");
    if (directions.empty())
        throw std::invalid_argument("empirical_psd: need at least one direction");
    for (const auto& dir : directions)
        if (static_cast<int>(dir.size()) != points.d)
            throw std::invalid_argument("empirical_psd: direction dimension mismatch");

    // project points once per direction
    std::vector<std::vector<double>> projections(directions.size());
    for (std::size_t q = 0; q < directions.size(); ++q) {
        projections[q].resize(points.n);
        for (int i = 0; i < points.n; ++i) {
            double dot = 0.0;
            for (int p = 0; p < points.d; ++p) dot += directions[q][p] * points.at(i, p);
            projections[q][i] = dot;
        }
    }
    SpectrumProfile spectrum;
    spectrum.grid = k_grid;
    spectrum.values.assign(k_grid.points.size(), 0.0);
    const double two_pi = 2.0 * std::numbers::pi;
    detail::parallel_for_index(static_cast<int>(k_grid.points.size()), [&](int j) {
        const double k = k_grid.points[j];
        double acc = 0.0;
        for (const auto& proj : projections) {
            double re = 0.0;
            double im = 0.0;
            for (double t : proj) {
                const double phase = -two_pi * k * t;
                re += std::cos(phase);
                im += std::sin(phase);
            }
            acc += (re * re + im * im) / points.n;
        }
        spectrum.values[j] = acc / static_cast<double>(projections.size());
    });
    return spectrum;
}

/// Random unit directions drawn deterministically from a seed.
inline std::vector<std::vector<double>> random_unit_directions(int count, int d,
                                                               std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> directions(count);
    for (auto& dir : directions) {
        dir.resize(d);
        double norm = 0.0;
        while (norm == 0.0) {
            for (int p = 0; p < d; ++p) dir[p] = rng.normal();
            norm = 0.0;
            for (int p = 0; p < d; ++p) norm += dir[p] * dir[p];
            norm = std::sqrt(norm);
        }
        for (int p = 0; p < d; ++p) dir[p] /= norm;
    }
    return directions;
}

/// Radially averaged empirical PSD over q_dirs seeded random directions.
inline SpectrumProfile empirical_psd(const PointSet& points, const SpectralGrid& k_grid,
                                     int q_dirs, std::uint64_t seed) {
    if (q_dirs < 1) throw std::invalid_argument("empirical_psd: q_dirs must be >= 1");
    if (points.n < 1) throw std::invalid_argument("empirical_psd: empty point set");
    return empirical_psd_directions(points, k_grid,
                                    random_unit_directions(q_dirs, points.d, seed));
}

/// Realizability check (both non-negativity conditions): the profile is
/// validated non-negative up front, and the induced PSD minimum over the
/// grid must stay above -tolerance.
inline RealizabilityReport check_realizability(
    const RadialProfile& profile, int n, int d, const SpectralGrid& k_grid,
    double tolerance = kRealizabilityTolerance) {
    const SpectrumProfile spectrum = pcf_to_psd(profile, n, d, k_grid);
    RealizabilityReport report;
    report.min_power = spectrum.values.front();
    report.argmin_k = spectrum.grid.points.front();
    for (std::size_t j = 1; j < spectrum.values.size(); ++j) {
        if (spectrum.values[j] < report.min_power) {
            report.min_power = spectrum.values[j];
            report.argmin_k = spectrum.grid.points[j];
        }
    }
    report.feasible = report.min_power >= -tolerance;
    return report;
}

} // namespace covdesign
