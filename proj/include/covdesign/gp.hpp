#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "covdesign/benchmarks.hpp"
#include "covdesign/errors.hpp"
#include "covdesign/point_set.hpp"
#include "covdesign/rng.hpp"

namespace covdesign {

struct GpConfig {
    double length_scale = 0.2;
    double signal_variance = 1.0;
    double noise_variance = 1e-6;
};

/// Squared-exponential-kernel Gaussian process posterior state.
class GpModel {
public:
    GpModel(PointSet inputs, std::vector<double> outputs, const GpConfig& cfg = {})
        : inputs_(std::move(inputs)), outputs_(std::move(outputs)), cfg_(cfg) {
        if (inputs_.n < 1)
            throw std::invalid_argument("gp_fit: need at least one training point");
        if (outputs_.size() != static_cast<std::size_t>(inputs_.n))
            throw std::invalid_argument("gp_fit: outputs size mismatch");
        factorize();
    }

    /// Posterior mean and variance at one point.
    std::pair<double, double> predict(const double* x) const {
        const int n = inputs_.n;
        std::vector<double> cross(n);
        for (int i = 0; i < n; ++i) cross[i] = kernel(inputs_.point(i), x);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) mean += cross[i] * alpha_[i];
        // variance via the triangular solve L v = k*
        std::vector<double> v = cross;
        forward_solve(v);
        double reduction = 0.0;
        for (double value : v) reduction += value * value;
        const double variance = std::max(cfg_.signal_variance - reduction, 0.0);
        return {mean, variance};
    }

    std::pair<double, double> predict(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != inputs_.d)
            throw std::invalid_argument("gp_predict: dimension mismatch");
        return predict(x.data());
    }

    int dimension() const { return inputs_.d; }
    const GpConfig& config() const { return cfg_; }

private:
    double kernel(const double* a, const double* b) const {
        double sq = 0.0;
        for (int p = 0; p < inputs_.d; ++p) {
            const double diff = a[p] - b[p];
            sq += diff * diff;
        }
        return cfg_.signal_variance *
               std::exp(-0.5 * sq / (cfg_.length_scale * cfg_.length_scale));
    }

    void factorize() {
        const int n = inputs_.n;
        std::vector<double> base(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                const double value = kernel(inputs_.point(i), inputs_.point(j));
                base[i * n + j] = value;
                base[j * n + i] = value;
            }
        double jitter = cfg_.noise_variance;
        for (; jitter <= 1e-3 + 1e-15; jitter *= 10.0) {
            chol_ = base;
            for (int i = 0; i < n; ++i) chol_[i * n + i] += jitter;
            if (cholesky(n)) {
                // alpha = K^-1 y via the two triangular solves
                alpha_ = outputs_;
                forward_solve(alpha_);
                backward_solve(alpha_);
                return;
            }
        }
        throw numerical_error("gp_fit: covariance factorization failed");
    }

    bool cholesky(int n) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j <= i; ++j) {
                double sum = chol_[i * n + j];
                for (int k = 0; k < j; ++k) sum -= chol_[i * n + k] * chol_[j * n + k];
                if (i == j) {
                    if (sum <= 0.0) return false;
                    chol_[i * n + i] = std::sqrt(sum);
                } else {
                    chol_[i * n + j] = sum / chol_[j * n + j];
                }
            }
            for (int j = i + 1; j < n; ++j) chol_[i * n + j] = 0.0;
        }
        return true;
    }

    void forward_solve(std::vector<double>& v) const {
        const int n = inputs_.n;
        for (int i = 0; i < n; ++i) {
            double sum = v[i];
            for (int k = 0; k < i; ++k) sum -= chol_[i * n + k] * v[k];
            v[i] = sum / chol_[i * n + i];
        }
    }

    void backward_solve(std::vector<double>& v) const {
        const int n = inputs_.n;
        for (int i = n - 1; i >= 0; --i) {
            double sum = v[i];
            for (int k = i + 1; k < n; ++k) sum -= chol_[k * n + i] * v[k];
            v[i] = sum / chol_[i * n + i];
        }
    }

    PointSet inputs_;
    std::vector<double> outputs_;
    GpConfig cfg_;
    std::vector<double> chol_;
    std::vector<double> alpha_;
};

inline GpModel gp_fit(const PointSet& inputs, const std::vector<double>& outputs,
                      const GpConfig& cfg = {}) {
    return GpModel(inputs, outputs, cfg);
}

inline std::pair<double, double> gp_predict(const GpModel& model,
                                            const std::vector<double>& x) {
    return model.predict(x);
}

/// Expected improvement under the minimization convention:
/// EI = (best - mu) Phi(z) + sigma phi(z), z = (best - mu) / sigma,
/// degenerating to max(best - mu, 0) at zero variance.
inline double expected_improvement(double mean, double variance, double best) {
    const double improvement = best - mean;
    if (variance <= 0.0) return std::max(improvement, 0.0);
    const double sigma = std::sqrt(variance);
    const double z = improvement / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf =
        std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return improvement * cdf + sigma * pdf;
}

inline double expected_improvement(const GpModel& model, const std::vector<double>& x,
                                   double best) {
    const auto [mean, variance] = model.predict(x);
    return expected_improvement(mean, variance, best);
}

struct BayesOptResult {
    PointSet points;             // initial + sequentially chosen
    std::vector<double> values;  // function values at those points
    std::vector<double> best_trace; // best-so-far after each addition
};

/// Sequential acquisition: fit the surrogate on everything evaluated, score
/// a fresh seeded uniform candidate pool by expected improvement, append the
/// argmax (ties to the lowest index), repeat `budget` times.
inline BayesOptResult bayes_opt_run(const PointSet& init, const BenchmarkFunction& f,
                                    int budget, int candidate_pool,
                                    const GpConfig& cfg = {},
                                    std::uint64_t seed = 0) {
    if (init.n < 1)
        throw std::invalid_argument("bayes_opt_run: empty initial design");
    if (budget < 0)
        throw std::invalid_argument("bayes_opt_run: budget must be >= 0");
    if (candidate_pool < 1)
        throw std::invalid_argument("bayes_opt_run: candidate_pool must be >= 1");

    BayesOptResult result;
    result.points = init;
    result.values = eval_function(f, init);
    result.best_trace.reserve(budget);
    double best = *std::min_element(result.values.begin(), result.values.end());

    std::vector<double> candidate(f.d);
    for (int step = 0; step < budget; ++step) {
        GpModel model(result.points, result.values, cfg);
        Rng rng(trial_seed(seed, static_cast<std::uint64_t>(step) + 1));
        double best_score = -1.0;
        std::vector<double> chosen(f.d);
        for (int c = 0; c < candidate_pool; ++c) {
            for (int p = 0; p < f.d; ++p) candidate[p] = rng.uniform();
            const auto [mean, variance] = model.predict(candidate.data());
            const double score = expected_improvement(mean, variance, best);
            if (score > best_score) { // strict: ties keep the lowest index
                best_score = score;
                chosen = candidate;
            }
        }
        result.points.coords.insert(result.points.coords.end(), chosen.begin(),
                                    chosen.end());
        result.points.n += 1;
        const double value = eval_function(f, chosen);
        result.values.push_back(value);
        best = std::min(best, value);
        result.best_trace.push_back(best);
    }
    return result;
}

} // namespace covdesign
