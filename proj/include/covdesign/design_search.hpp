#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

#include "covdesign/design_spec.hpp"
#include "covdesign/errors.hpp"
#include "covdesign/pcf_models.hpp"
#include "covdesign/spectral.hpp"

namespace covdesign {

/// Result of one gradient run of the parameter-selection algorithm.
struct OptimizeResult {
    double r_min = 0.0;
    double r_1 = 0.0;
    RealizabilityReport report;
    PcfParams params; // full parameter record actually used (clamped amplitude)
    int iterations = 0;
};

/// Optimized parameters for one design family at one (N, d).
struct CoverageReport {
    PcfParams params;
    double rho = 0.0;
    bool feasible = false;
    double min_power = 0.0;
};

namespace detail {

// Oscillation amplitudes are capped so the tail cannot drive G(r) negative:
// (a / r) exp(-b r) <= a / (r_1 exp(-b r_1)) for r >= r_1.
inline constexpr double kAmplitudeSafety = 0.95;

// A tail is only worth carrying into a design if its oscillation survives
// the synthesis estimator: one period must span at least six kernel
// bandwidths of the default grid (sigma = 2 * 3 r_bar / 200), i.e.
// frequency * reference_radius <= 200 / 36. Finer tails integrate to zero
// under the kernel, so the synthesizer chases structure it can never
// express and the point set only degrades.
inline constexpr double kMaxResolvableFrequencyScale = 200.0 / 36.0;

inline bool tail_resolvable(const DesignSpec& spec, double frequency) {
    return frequency * reference_radius(spec) <= kMaxResolvableFrequencyScale;
}

inline double clamped_amplitude(double requested, double r_1, double decay) {
    if (requested <= 0.0) return 0.0;
    const double bound = kAmplitudeSafety * r_1 * std::exp(decay * r_1);
    return std::min(requested, bound);
}

// P(k) evaluator for stair profiles with an optional damped-oscillation
// tail, tuned for the parameter-search inner loop.
//
// Stair segments use the exact moment identity
//   int_0^R r^(d/2) J_(d/2-1)(k r) dr = R^(d/2) J_(d/2)(k R) / k,
// so each frequency costs two or three Bessel evaluations. The tail is the
// closed-form Laplace-type transform over [0, inf),
//   int_0^inf e^(-p r) r^nu J_nu(k r) dr =
//   (2k)^nu Gamma(nu + 1/2) / (sqrt(pi) (p^2 + k^2)^(nu + 1/2)),
// with p = decay - i 2 pi frequency (imaginary part taken after rotating by
// the phase), minus a head integral over [0, r_1] maintained incrementally
// as r_1 drifts. Results feed the search path only; returned designs are
// re-verified through the quadrature pipeline.
class SearchPsd {
public:
    SearchPsd(const DesignSpec& spec, const SpectralGrid& grid, double p0,
              const PcfTail& oscillation, bool with_tail, int per_osc = 12)
        : grid_(grid),
          bessel_step_(0.5 * spec.d),
          bessel_tail_(0.5 * spec.d - 1.0),
          dim_(spec.d),
          p0_(p0),
          osc_(oscillation),
          with_tail_(with_tail),
          per_osc_(per_osc) {
        const double half_d = 0.5 * spec.d;
        prefactor_.resize(grid.points.size());
        for (std::size_t j = 0; j < grid.points.size(); ++j) {
            const double k = grid.points[j];
            prefactor_[j] = spec.n * std::pow(2.0 * std::numbers::pi, half_d) *
                            std::pow(k, 1.0 - half_d);
        }
        if (with_tail_) {
            const double nu = half_d - 1.0;
            const std::complex<double> p(osc_.decay,
                                         -2.0 * std::numbers::pi * osc_.frequency);
            const std::complex<double> rotation(std::cos(osc_.phase),
                                                std::sin(osc_.phase));
            tail_infinite_.resize(grid.points.size());
            for (std::size_t j = 0; j < grid.points.size(); ++j) {
                const double k = grid.points[j];
                const std::complex<double> denom =
                    std::pow(p * p + k * k, nu + 0.5);
                const std::complex<double> value =
                    rotation * std::pow(2.0 * k, nu) *
                    std::tgamma(nu + 0.5) / (std::sqrt(std::numbers::pi) * denom);
                tail_infinite_[j] = value.imag();
            }
            head_.assign(grid.points.size(), 0.0);
            head_r1_ = 0.0;
        }
    }

    // unit-amplitude tail integrand r^nu e^(-b r) sin(2 pi c r + phase)
    double tail_weight(double r) const {
        return half_power(r, dim_ - 2) * std::exp(-osc_.decay * r) *
               std::sin(2.0 * std::numbers::pi * osc_.frequency * r + osc_.phase);
    }

    double stair_transform(double k, double r_min, double r_1) const {
        const double inv_k = 1.0 / k;
        const double step = half_power(r_min, dim_) * bessel_step_(k * r_min) * inv_k;
        double total = -step;
        if (p0_ != 1.0 && r_1 > r_min) {
            const double peak_hi =
                half_power(r_1, dim_) * bessel_step_(k * r_1) * inv_k;
            total += (p0_ - 1.0) * (peak_hi - step);
        }
        return total;
    }

    /// P on the whole grid. When a tail is present, calls must move r_1 in
    /// small steps (the head integral advances incrementally).
    void eval_grid(double r_min, double r_1, double amplitude,
                   std::vector<double>& out) {
        out.resize(grid_.points.size());
        if (with_tail_ && amplitude > 0.0) advance_head(r_1);
        for (std::size_t j = 0; j < grid_.points.size(); ++j) {
            const double k = grid_.points[j];
            double transform = stair_transform(k, r_min, r_1);
            if (with_tail_ && amplitude > 0.0)
                transform += amplitude * (tail_infinite_[j] - head_[j]);
            out[j] = 1.0 + prefactor_[j] * transform;
        }
    }

    double min_power(double r_min, double r_1, double amplitude,
                     std::vector<double>& scratch) {
        eval_grid(r_min, r_1, amplitude, scratch);
        return scratch[argmin_index_local(scratch)];
    }

    /// P at a single frequency, stateless (used by finite differences).
    double eval_single(std::size_t j, double r_min, double r_1,
                       double amplitude) const {
        const double k = grid_.points[j];
        double transform = stair_transform(k, r_min, r_1);
        if (with_tail_ && amplitude > 0.0) {
            const double osc = 2.0 * std::numbers::pi * osc_.frequency;
            const int n = oscillation_subintervals(0.0, r_1, k + osc, per_osc_, 4);
            const double head = simpson(
                [&](double r) { return tail_weight(r) * bessel_tail_(k * r); }, 0.0,
                r_1, n);
            transform += amplitude * (tail_infinite_[j] - head);
        }
        return 1.0 + prefactor_[j] * transform;
    }

    const SpectralGrid& grid() const { return grid_; }

private:
    static std::size_t argmin_index_local(const std::vector<double>& values) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < values.size(); ++j)
            if (values[j] < values[best]) best = j;
        return best;
    }

    void advance_head(double r_1) {
        if (r_1 == head_r1_) return;
        const double osc = 2.0 * std::numbers::pi * osc_.frequency;
        const double lo = std::min(head_r1_, r_1);
        const double hi = std::max(head_r1_, r_1);
        const double sign = r_1 >= head_r1_ ? 1.0 : -1.0;
        for (std::size_t j = 0; j < grid_.points.size(); ++j) {
            const double k = grid_.points[j];
            const int n = oscillation_subintervals(lo, hi, k + osc, per_osc_, 2);
            head_[j] += sign * simpson(
                [&](double r) { return tail_weight(r) * bessel_tail_(k * r); },
                lo, hi, n);
        }
        head_r1_ = r_1;
    }

    SpectralGrid grid_;
    BesselJ bessel_step_; // order d/2, for the stair moment identity
    BesselJ bessel_tail_; // order d/2 - 1, the transform kernel
    int dim_;
    double p0_;
    PcfTail osc_;
    bool with_tail_;
    int per_osc_;
    std::vector<double> prefactor_;
    std::vector<double> tail_infinite_;
    std::vector<double> head_;
    double head_r1_ = 0.0;
};

inline std::size_t argmin_index(const std::vector<double>& values) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < values.size(); ++j)
        if (values[j] < values[best]) best = j;
    return best;
}

/// Largest x <= cap with pred(x) true, assuming pred flips once from true
/// to false as x grows. The start point is walked down first if needed.
template <class Pred>
double ascend_boundary(Pred&& pred, double start, double cap, double rel_tol) {
    double good = start;
    int walked = 0;
    while (walked < 400 && !pred(good)) {
        good *= 0.97;
        ++walked;
    }
    if (walked == 400)
        throw infeasible_design_error("boundary refinement: no feasible base");
    double bad = cap;
    for (;;) {
        if (good >= cap) return cap;
        const double probe = std::min(good * 1.08, cap);
        if (!pred(probe)) {
            bad = probe;
            break;
        }
        good = probe;
        if (probe >= cap) return cap;
    }
    while ((bad - good) > rel_tol * good) {
        const double mid = 0.5 * (good + bad);
        (pred(mid) ? good : bad) = mid;
    }
    return good;
}

// Checker-grade feasibility of a stair+tail candidate, sharing the exact
// quadrature path of pcf_to_psd so the search agrees bit-for-bit with
// check_realizability. The tail contribution is r_min-independent and is
// cached across candidates at fixed (r_1, amplitude).
class RefineEvaluator {
public:
    RefineEvaluator(const DesignSpec& spec, const SpectralGrid& grid,
                    const PcfParams& shape)
        : spec_(spec), grid_(grid), shape_(shape), bessel_(0.5 * spec.d - 1.0) {
        const double half_d = 0.5 * spec_.d;
        prefactor_.resize(grid_.points.size());
        for (std::size_t j = 0; j < grid_.points.size(); ++j)
            prefactor_[j] = spec_.n * std::pow(2.0 * std::numbers::pi, half_d) *
                            std::pow(grid_.points[j], 1.0 - half_d);
        tail_.assign(grid_.points.size(), 0.0);
        if (shape_.family == PcfFamily::kProposed && shape_.amplitude > 0.0) {
            PcfTail tail;
            tail.start = shape_.r_1;
            tail.amplitude = shape_.amplitude;
            tail.decay = shape_.decay;
            tail.frequency = shape_.frequency;
            tail.phase = shape_.phase;
            const double end = tail.extent(kTailTruncationEps);
            const int d = spec_.d;
            const double osc = 2.0 * std::numbers::pi * tail.frequency;
            parallel_for_index(static_cast<int>(grid_.points.size()), [&](int j) {
                const double k = grid_.points[j];
                tail_[j] = bessel_segment(
                    bessel_, k,
                    [&](double r) { return half_power(r, d) * tail.deviation(r); },
                    tail.start, end, osc);
            });
        }
    }

    double min_power(double r_min) const {
        const int d = spec_.d;
        double best = std::numeric_limits<double>::infinity();
        const double r_1 = std::max(shape_.r_1, r_min);
        std::vector<double> values(grid_.points.size());
        parallel_for_index(static_cast<int>(grid_.points.size()), [&](int j) {
            const double k = grid_.points[j];
            const double mid1 = 1e-9 * r_min;
            auto w1 = [&](double r) {
                const double rr = std::clamp(r, mid1, r_min - mid1);
                return half_power(rr, d) * (0.0 - 1.0);
            };
            double transform = bessel_segment(bessel_, k, w1, 0.0, r_min);
            if (r_1 > r_min && shape_.p0 != 1.0) {
                const double mid2 = 1e-9 * (r_1 - r_min);
                auto w2 = [&](double r) {
                    const double rr = std::clamp(r, r_min + mid2, r_1 - mid2);
                    return half_power(rr, d) * (shape_.p0 - 1.0);
                };
                transform += bessel_segment(bessel_, k, w2, r_min, r_1);
            }
            transform += tail_[j];
            values[j] = 1.0 + prefactor_[j] * transform;
        });
        for (double v : values) best = std::min(best, v);
        return best;
    }

private:
    DesignSpec spec_;
    SpectralGrid grid_;
    PcfParams shape_;
    BesselJ bessel_;
    std::vector<double> prefactor_;
    std::vector<double> tail_;
};

} // namespace detail

/// Tuning knobs of the parameter search; the defaults are the published
/// configuration.
struct SearchOptions {
    double step = -1.0;       // learning rate; negative = 1e-3 * reference radius
    int max_iters = 10000;
    int search_max_iters = 1200; // per-candidate flow budget inside search_design
    int m_k = 1000;           // spectral grid resolution
    double fd_scale = 1e-4;   // finite-difference step, times reference radius
    double refine_margin = 1e-5; // feasibility buffer kept after refinement
    bool exhaustive_oscillations = false; // sweep A/B/C/D on coarse grids
    int exhaustive_steps = 3; // grid points per oscillation axis in that mode
};

namespace detail {

struct FlowOutcome {
    double r_min = 0.0;
    double r_1 = 0.0;
    double amplitude = 0.0;
    double fast_min_power = 0.0;
    int iterations = 0;
    PcfFamily shape_family = PcfFamily::kSfsd;
    double p0 = 1.0;
    double hi_cap = 0.0;
    bool pinned = false;
};

// Gradient flow of the printed update rules plus boundary refinement.
//
// The flow ascends r_min (update: r_min * dP/dr_min + P(k*)) and descends
// r_1 against r_min * dP/dr_1, re-locating k* = argmin P each iteration,
// stopping on infeasibility (last feasible iterate is kept), stall, or the
// iteration cap. A bisection along r_min at the final (r_1, P0) then pins
// the realizability boundary, which the raw updates alone approach only
// from whatever direction the flow happened to take.
inline FlowOutcome optimize_flow(const DesignSpec& spec, PcfFamily family,
                                 double p0, const PcfParams& osc_defaults,
                                 const SearchOptions& options) {
    validate(spec);
    if (p0 < 1.0)
        throw std::invalid_argument("optimize_parameters: p0 must be >= 1");
    const double ref = reference_radius(spec);
    const double step = options.step < 0.0 ? 1e-3 * ref : options.step;

    const SpectralGrid grid = default_spectral_grid(spec, options.m_k);
    PcfTail osc;
    osc.decay = osc_defaults.decay;
    osc.frequency = osc_defaults.frequency;
    osc.phase = osc_defaults.phase;
    const bool with_tail =
        family == PcfFamily::kProposed && osc_defaults.amplitude > 0.0;
    const double requested_amp = with_tail ? osc_defaults.amplitude : 0.0;
    const double effective_p0 = family == PcfFamily::kPds ? 1.0 : p0;

    detail::SearchPsd psd(spec, grid, effective_p0, osc, with_tail);

    double r_min = ref;
    double r_1 = 2.0 * r_min;
    auto amplitude_at = [&](double r1v) {
        return with_tail ? clamped_amplitude(requested_amp, r1v, osc.decay) : 0.0;
    };

    // Initialization at the conventional radius can already violate
    // realizability; halve until the spectrum clears zero (<= 20 times).
    std::vector<double> values;
    double amp = amplitude_at(r_1);
    bool feasible_start = false;
    for (int attempt = 0; attempt <= 20; ++attempt) {
        psd.eval_grid(r_min, r_1, amp, values);
        if (values[argmin_index(values)] >= 0.0) {
            feasible_start = true;
            break;
        }
        r_min *= 0.5;
        r_1 = 2.0 * r_min;
        amp = amplitude_at(r_1);
    }
    if (!feasible_start)
        throw infeasible_design_error(
            "optimize_parameters: no feasible start after pre-scaling");

    FlowOutcome best{r_min, r_1, amp, values[argmin_index(values)], 0};
    best.p0 = effective_p0;
    best.shape_family = family == PcfFamily::kPds ? PcfFamily::kPds
                        : with_tail && amp > 0.0 ? PcfFamily::kProposed
                                                 : PcfFamily::kSfsd;
    best.hi_cap = r_1;
    if (step == 0.0) {
        best.pinned = true; // zero update: the initialization is the result
        return best;
    }

    const double fd = options.fd_scale * ref;
    const double floor = 1e-8 * ref;
    int t = 0;
    for (; t < options.max_iters; ++t) {
        psd.eval_grid(r_min, r_1, amp, values);
        const std::size_t star = argmin_index(values);
        const double p_star = values[star];
        if (p_star < 0.0) break; // keep the last feasible iterate
        best = {r_min, r_1, amp, p_star, t};

        const double rm_hi = r_min + fd;
        const double rm_lo = std::max(r_min - fd, floor);
        const double d_rm = (psd.eval_single(star, rm_hi, r_1, amp) -
                             psd.eval_single(star, rm_lo, r_1, amp)) /
                            (rm_hi - rm_lo);
        const double r1_hi = r_1 + fd;
        const double r1_lo = std::max(r_1 - fd, r_min);
        const double d_r1 = (psd.eval_single(star, r_min, r1_hi, amplitude_at(r1_hi)) -
                             psd.eval_single(star, r_min, r1_lo, amplitude_at(r1_lo))) /
                            (r1_hi - r1_lo);

        const double new_r_min =
            std::max(floor, r_min + step * (r_min * d_rm + p_star));
        const double new_r_1 = std::max(new_r_min, r_1 - step * (new_r_min * d_r1));
        if (std::abs(new_r_min - r_min) + std::abs(new_r_1 - r_1) < 1e-12 * ref) {
            r_min = new_r_min;
            r_1 = new_r_1;
            break; // stalled
        }
        r_min = new_r_min;
        r_1 = new_r_1;
        amp = amplitude_at(r_1);
    }
    best.iterations = t;

    // Rough boundary refinement: largest feasible r_min at the flow's final
    // shape under the search evaluator. pin_outcome re-pins results through
    // the exact quadrature path check_realizability uses.
    best.shape_family = family == PcfFamily::kPds ? PcfFamily::kPds
                        : with_tail && best.amplitude > 0.0
                            ? PcfFamily::kProposed
                            : PcfFamily::kSfsd;
    best.p0 = effective_p0;
    // a tail anchored at r_1 caps the step there; otherwise the peak may
    // collapse and the profile degenerates to a plain step
    best.hi_cap = (with_tail && best.amplitude > 0.0)
                      ? best.r_1
                      : std::max(best.r_1, 4.0 * ref);
    std::vector<double> scratch;
    const double margin = options.refine_margin;
    best.r_min = ascend_boundary(
        [&](double rm) {
            return psd.min_power(rm, best.r_1, best.amplitude, scratch) >= margin;
        },
        best.r_min, best.hi_cap, 2e-3);
    best.fast_min_power =
        psd.min_power(best.r_min, best.r_1, best.amplitude, scratch);
    return best;
}

// Pin a rough outcome to the realizability boundary through the quadrature
// path shared with pcf_to_psd, so the re-verification report agrees with
// the search by construction.
inline FlowOutcome pin_outcome(const DesignSpec& spec, const FlowOutcome& rough,
                               const PcfParams& osc_defaults,
                               const SearchOptions& options) {
    FlowOutcome out = rough;
    if (out.pinned) return out;
    PcfParams shape;
    shape.family = rough.shape_family;
    shape.r_min = rough.r_min;
    shape.r_1 = rough.r_1;
    shape.p0 = rough.p0;
    shape.amplitude = rough.amplitude;
    shape.decay = osc_defaults.decay;
    shape.frequency = osc_defaults.frequency;
    shape.phase = osc_defaults.phase;
    const SpectralGrid grid = default_spectral_grid(spec, options.m_k);
    detail::RefineEvaluator refine(spec, grid, shape);
    const double margin = options.refine_margin;
    out.r_min = ascend_boundary(
        [&](double rm) { return refine.min_power(rm) >= margin; }, rough.r_min,
        std::min(rough.r_min * 1.02, rough.hi_cap), 1e-4);
    out.r_1 = std::max(rough.r_1, out.r_min);
    out.fast_min_power = refine.min_power(out.r_min);
    out.pinned = true;
    return out;
}

inline PcfParams outcome_params(PcfFamily family, double p0,
                                const PcfParams& osc_defaults,
                                const FlowOutcome& outcome) {
    PcfParams params;
    params.family = family;
    params.r_min = outcome.r_min;
    params.r_1 = family == PcfFamily::kPds ? outcome.r_min : outcome.r_1;
    params.p0 = family == PcfFamily::kPds ? 1.0 : p0;
    params.amplitude = family == PcfFamily::kProposed ? outcome.amplitude : 0.0;
    params.decay = osc_defaults.decay;
    params.frequency = osc_defaults.frequency;
    params.phase = osc_defaults.phase;
    return params;
}

} // namespace detail

/// Automatic parameter selection for one peak height: gradient flow of the
/// update rules followed by boundary refinement, returning a fully verified
/// result (the report comes from check_realizability on the actual profile).
inline OptimizeResult optimize_parameters(const DesignSpec& spec, double p0,
                                          PcfFamily family = PcfFamily::kProposed,
                                          const PcfParams& osc_defaults = {},
                                          const SearchOptions& options = {}) {
    auto outcome = detail::optimize_flow(spec, family, p0, osc_defaults, options);
    outcome = detail::pin_outcome(spec, outcome, osc_defaults, options);
    OptimizeResult result;
    result.r_min = outcome.r_min;
    result.r_1 = outcome.r_1;
    result.iterations = outcome.iterations;
    result.params = detail::outcome_params(family, p0, osc_defaults, outcome);
    const RadialGrid grid = default_radial_grid(spec);
    const RadialProfile profile = pcf_profile(result.params, grid);
    result.report = check_realizability(profile, spec.n, spec.d,
                                        default_spectral_grid(spec, options.m_k));
    return result;
}

/// Brute-force search over the peak-height grid (plus the zero-amplitude
/// member for the proposed family), keeping the feasible result with the
/// largest coverage radius. For the step family this degenerates to the
/// 1-d feasibility sweep.
inline CoverageReport search_design(const DesignSpec& spec, PcfFamily family,
                                    const std::vector<double>& p0_grid,
                                    const PcfParams& osc_defaults = {},
                                    const SearchOptions& options = {},
                                    const PackingTable& table = default_packing_table()) {
    validate(spec);
    if (p0_grid.empty())
        throw std::invalid_argument("search_design: empty p0 grid");
    for (double p0 : p0_grid)
        if (p0 < 1.0 || p0 > 2.5)
            throw std::invalid_argument("search_design: p0 outside [1.0, 2.5]");

    struct Candidate {
        double p0 = 1.0;
        bool tail = false;
        PcfParams osc;
        detail::FlowOutcome outcome;
        bool ok = false;
    };
    std::vector<Candidate> candidates;
    if (family == PcfFamily::kPds) {
        candidates.push_back({1.0, false, osc_defaults, {}, false});
    } else {
        // tail parameter set: the fixed defaults, or coarse grids over the
        // published oscillation ranges in exhaustive mode
        std::vector<PcfParams> tails;
        if (family == PcfFamily::kProposed && osc_defaults.amplitude > 0.0) {
            if (options.exhaustive_oscillations) {
                const int steps = std::max(options.exhaustive_steps, 1);
                auto axis = [steps](double lo, double hi, int i) {
                    return steps == 1 ? 0.5 * (lo + hi)
                                      : lo + (hi - lo) * i / (steps - 1.0);
                };
                for (int ia = 0; ia < steps; ++ia)
                    for (int ib = 0; ib < steps; ++ib)
                        for (int ic = 0; ic < steps; ++ic)
                            for (int id = 0; id < steps; ++id) {
                                PcfParams osc;
                                osc.amplitude = axis(0.1, 0.9, ia);
                                osc.decay = axis(2.0, 6.0, ib);
                                osc.frequency = axis(50.0, 600.0, ic);
                                osc.phase = axis(-std::numbers::pi,
                                                 std::numbers::pi, id);
                                tails.push_back(osc);
                            }
            } else if (detail::tail_resolvable(spec, osc_defaults.frequency)) {
                tails.push_back(osc_defaults);
            }
        }
        for (double p0 : p0_grid) {
            candidates.push_back({p0, false, osc_defaults, {}, false});
            for (const auto& osc : tails)
                candidates.push_back({p0, true, osc, {}, false});
        }
    }

    SearchOptions per_candidate = options;
    per_candidate.max_iters = std::min(options.max_iters, options.search_max_iters);
    auto run_candidate = [&](Candidate& c) {
        PcfParams osc = c.osc;
        if (!c.tail) osc.amplitude = 0.0;
        const PcfFamily run_family =
            family == PcfFamily::kProposed && !c.tail ? PcfFamily::kSfsd : family;
        try {
            c.outcome =
                detail::optimize_flow(spec, run_family, c.p0, osc, per_candidate);
            c.ok = true;
        } catch (const infeasible_design_error&) {
            c.ok = false;
        }
    };

    // peak-height grid points are independent; split across two workers
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw >= 2 && candidates.size() > 1) {
        std::thread other([&] {
            for (std::size_t i = 1; i < candidates.size(); i += 2)
                run_candidate(candidates[i]);
        });
        for (std::size_t i = 0; i < candidates.size(); i += 2)
            run_candidate(candidates[i]);
        other.join();
    } else {
        for (auto& c : candidates) run_candidate(c);
    }

    // winners are re-pinned through the exact quadrature path; for the
    // proposed family the best zero-amplitude candidate is pinned as well,
    // so the result can never fall below the stair-family search
    Candidate* best = nullptr;
    Candidate* best_plain = nullptr;
    for (auto& c : candidates) {
        if (!c.ok) continue;
        if (!best || c.outcome.r_min > best->outcome.r_min) best = &c;
        if (!c.tail && (!best_plain || c.outcome.r_min > best_plain->outcome.r_min))
            best_plain = &c;
    }
    if (!best)
        throw infeasible_design_error("search_design: no feasible parameter set");
    best->outcome = detail::pin_outcome(spec, best->outcome, best->osc, options);
    if (best_plain && best_plain != best) {
        best_plain->outcome =
            detail::pin_outcome(spec, best_plain->outcome, best_plain->osc, options);
        if (best_plain->outcome.r_min > best->outcome.r_min) best = best_plain;
    }

    CoverageReport report;
    report.params = detail::outcome_params(
        family, family == PcfFamily::kPds ? 1.0 : best->p0, best->osc,
        best->outcome);
    if (family == PcfFamily::kProposed && !best->tail) {
        report.params.family = PcfFamily::kProposed;
        report.params.amplitude = 0.0;
    }
    // re-verification with the actual profile, never trusting the search
    const RadialGrid grid = default_radial_grid(spec);
    const RadialProfile profile = pcf_profile(report.params, grid);
    const auto check = check_realizability(profile, spec.n, spec.d,
                                           default_spectral_grid(spec, options.m_k));
    report.feasible = check.feasible;
    report.min_power = check.min_power;
    report.rho = relative_radius(report.params.r_min, spec, table);
    return report;
}

/// The published peak-height grid {1.00, 1.05, ..., 2.50}.
inline std::vector<double> default_p0_grid() {
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(1.0 + 0.05 * i);
    return grid;
}

} // namespace covdesign
