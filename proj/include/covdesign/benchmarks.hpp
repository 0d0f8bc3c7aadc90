#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "covdesign/point_set.hpp"

namespace covdesign {

enum class BenchmarkName { kAlpine1, kAckley };

/// A benchmark regression surface with its native box, sampled through the
/// unit cube by affine mapping.
struct BenchmarkFunction {
    BenchmarkName name = BenchmarkName::kAlpine1;
    int d = 2;
    double lower = -10.0;
    double upper = 10.0;
};

inline BenchmarkFunction make_benchmark(BenchmarkName name, int d) {
    if (d < 1) throw std::invalid_argument("make_benchmark: d must be >= 1");
    BenchmarkFunction f;
    f.name = name;
    f.d = d;
    if (name == BenchmarkName::kAlpine1) {
        f.lower = -10.0;
        f.upper = 10.0;
    } else {
        f.lower = -32.768;
        f.upper = 32.768;
    }
    return f;
}

inline BenchmarkFunction make_benchmark(const std::string& name, int d) {
    if (name == "alpine1") return make_benchmark(BenchmarkName::kAlpine1, d);
    if (name == "ackley") return make_benchmark(BenchmarkName::kAckley, d);
    throw std::invalid_argument("make_benchmark: unknown function " + name);
}

/// Evaluate at a unit-cube point (affinely mapped to the native box).
inline double eval_function(const BenchmarkFunction& f, const double* u) {
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    double sum_cos = 0.0;
    for (int p = 0; p < f.d; ++p) {
        if (!(u[p] >= 0.0) || !(u[p] <= 1.0))
            throw std::invalid_argument("eval_function: point outside unit cube");
        const double x = f.lower + (f.upper - f.lower) * u[p];
        if (f.name == BenchmarkName::kAlpine1) {
            sum_abs += std::abs(x * std::sin(x) + 0.1 * x);
        } else {
            sum_sq += x * x;
            sum_cos += std::cos(2.0 * std::numbers::pi * x);
        }
    }
    if (f.name == BenchmarkName::kAlpine1) return sum_abs;
    return -20.0 * std::exp(-0.2 * std::sqrt(sum_sq / f.d)) -
           std::exp(sum_cos / f.d) + 20.0 + std::numbers::e;
}

inline double eval_function(const BenchmarkFunction& f, const std::vector<double>& u) {
    if (static_cast<int>(u.size()) != f.d)
        throw std::invalid_argument("eval_function: dimension mismatch");
    return eval_function(f, u.data());
}

inline std::vector<double> eval_function(const BenchmarkFunction& f,
                                         const PointSet& points) {
    std::vector<double> values(points.n);
    for (int i = 0; i < points.n; ++i) values[i] = eval_function(f, points.point(i));
    return values;
}

/// Regular grid test set: the smallest per-axis count g with g^d >= target,
/// midpoint-placed, with function values.
inline std::pair<PointSet, std::vector<double>> grid_test_set(
    const BenchmarkFunction& f, long target) {
    if (target < 1) throw std::invalid_argument("grid_test_set: target must be >= 1");
    long per_axis = 1;
    auto total_of = [&](long g) {
        long total = 1;
        for (int p = 0; p < f.d; ++p) {
            if (total > (1L << 40) / g) return (1L << 40); // overflow guard
            total *= g;
        }
        return total;
    };
    while (total_of(per_axis) < target) ++per_axis;
    const long total = total_of(per_axis);

    PointSet points;
    points.d = f.d;
    points.n = static_cast<int>(total);
    points.coords.resize(static_cast<std::size_t>(total) * f.d);
    std::vector<long> digits(f.d, 0);
    for (long i = 0; i < total; ++i) {
        for (int p = 0; p < f.d; ++p)
            points.at(static_cast<int>(i), p) = (digits[p] + 0.5) / per_axis;
        for (int p = f.d - 1; p >= 0; --p) {
            if (++digits[p] < per_axis) break;
            digits[p] = 0;
        }
    }
    points.meta.method = "grid";
    auto values = eval_function(f, points);
    return {std::move(points), std::move(values)};
}

/// Number of scores strictly greater than the threshold.
inline int precision_metric(const std::vector<double>& scores, double tau) {
    int count = 0;
    for (double s : scores)
        if (s > tau) ++count;
    return count;
}

} // namespace covdesign
