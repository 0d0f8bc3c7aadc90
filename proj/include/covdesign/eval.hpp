#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "covdesign/benchmarks.hpp"
#include "covdesign/design_spec.hpp"
#include "covdesign/gp.hpp"
#include "covdesign/point_set.hpp"
#include "covdesign/regression.hpp"
#include "covdesign/rng.hpp"

namespace covdesign {

/// A design generator: (spec, seed) -> points. Trial seeds derive from the
/// base seed by addition.
using DesignGenerator = std::function<PointSet(const DesignSpec&, std::uint64_t)>;

struct EvalResult {
    double mse_mean = 0.0;
    double mse_std = 0.0;
    int trials = 0;
    std::vector<double> per_trial;
};

struct EvalConfig {
    OracleConfig oracle;
    long test_target = 10000; // regular-grid test budget
    std::uint64_t base_seed = 1;
};

namespace detail {

inline double mse(const std::vector<double>& predictions,
                  const std::vector<double>& truth) {
    double acc = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double diff = predictions[i] - truth[i];
        acc += diff * diff;
    }
    return acc / static_cast<double>(truth.size());
}

inline EvalResult aggregate(std::vector<double> per_trial) {
    EvalResult result;
    result.trials = static_cast<int>(per_trial.size());
    double mean = 0.0;
    for (double v : per_trial) mean += v;
    mean /= result.trials;
    double var = 0.0;
    for (double v : per_trial) var += (v - mean) * (v - mean);
    result.mse_mean = mean;
    result.mse_std = std::sqrt(var / result.trials);
    result.per_trial = std::move(per_trial);
    return result;
}

// Trials are independent given their derived seeds; run them on two workers
// and aggregate in trial order so results do not depend on scheduling.
template <class Fn>
void parallel_trials(int trials, Fn&& run_trial) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw < 2 || trials < 2) {
        for (int t = 0; t < trials; ++t) run_trial(t);
        return;
    }
    std::thread other([&] {
        for (int t = 1; t < trials; t += 2) run_trial(t);
    });
    for (int t = 0; t < trials; t += 2) run_trial(t);
    other.join();
}

} // namespace detail

/// Blind exploration: per trial, draw a design with a derived seed, evaluate
/// the benchmark on it, fit the oracle, and score recovery MSE on the grid
/// test set.
inline EvalResult blind_eval(const DesignGenerator& generate,
                             const BenchmarkFunction& f, int n, int trials,
                             const EvalConfig& cfg = {}) {
    if (trials < 1) throw std::invalid_argument("blind_eval: trials must be >= 1");
    const auto [test_points, truth] = grid_test_set(f, cfg.test_target);
    DesignSpec spec{n, f.d};
    std::vector<double> per_trial(trials);
    detail::parallel_trials(trials, [&](int t) {
        const PointSet design = generate(spec, trial_seed(cfg.base_seed, t));
        const auto train_values = eval_function(f, design);
        const auto predictions = fit_predict(design, train_values, test_points,
                                             cfg.oracle);
        per_trial[t] = detail::mse(predictions, truth);
    });
    return detail::aggregate(std::move(per_trial));
}

struct SequentialConfig {
    int init_n = 50;
    int budget = 150;
    int candidate_pool = 2048;
    GpConfig gp;
    OracleConfig oracle;
    long test_target = 10000;
    std::uint64_t base_seed = 1;
};

struct SequentialOutcome {
    EvalResult recovery;                       // refit-oracle MSE per trial
    std::vector<std::vector<double>> traces;   // best-so-far per trial
};

/// Sequential sampling: the exploratory design seeds a Bayes-Opt loop; the
/// reported metric is the recovery MSE of the oracle refit on everything
/// collected (initial plus acquired samples).
inline SequentialOutcome sequential_eval(const DesignGenerator& generate,
                                         const BenchmarkFunction& f, int trials,
                                         const SequentialConfig& cfg = {}) {
    if (trials < 1)
        throw std::invalid_argument("sequential_eval: trials must be >= 1");
    const auto [test_points, truth] = grid_test_set(f, cfg.test_target);
    DesignSpec spec{cfg.init_n, f.d};
    SequentialOutcome outcome;
    outcome.traces.assign(trials, {});
    std::vector<double> per_trial(trials);
    detail::parallel_trials(trials, [&](int t) {
        const std::uint64_t seed = trial_seed(cfg.base_seed, t);
        const PointSet init = generate(spec, seed);
        const auto run = bayes_opt_run(init, f, cfg.budget, cfg.candidate_pool,
                                       cfg.gp, seed);
        const auto predictions =
            fit_predict(run.points, run.values, test_points, cfg.oracle);
        per_trial[t] = detail::mse(predictions, truth);
        outcome.traces[t] = run.best_trace;
    });
    outcome.recovery = detail::aggregate(std::move(per_trial));
    return outcome;
}

} // namespace covdesign
