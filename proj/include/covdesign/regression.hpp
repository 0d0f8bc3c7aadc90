#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "covdesign/point_set.hpp"
#include "covdesign/rng.hpp"

namespace covdesign {

enum class OracleKind { kKnn, kTreeEnsemble };

struct OracleConfig {
    OracleKind kind = OracleKind::kKnn;
    int k = 5;          // neighbor count
    int trees = 100;    // ensemble size
    int max_depth = 12;
    std::uint64_t seed = 0;
};

namespace detail {

inline double squared_distance(const double* a, const double* b, int d) {
    double sq = 0.0;
    for (int p = 0; p < d; ++p) {
        const double diff = a[p] - b[p];
        sq += diff * diff;
    }
    return sq;
}

// Inverse-distance-weighted k-nearest-neighbor prediction. Distance ties
// break toward the lower training index; an exact hit returns that training
// value.
inline double knn_predict(const PointSet& train, const std::vector<double>& values,
                          const double* x, int k) {
    const int n = train.n;
    std::vector<std::pair<double, int>> order(n);
    for (int i = 0; i < n; ++i)
        order[i] = {squared_distance(train.point(i), x, train.d), i};
    const int keep = std::min(k, n);
    std::partial_sort(order.begin(), order.begin() + keep, order.end());
    if (order.front().first == 0.0) return values[order.front().second];
    double weight_sum = 0.0;
    double acc = 0.0;
    for (int j = 0; j < keep; ++j) {
        const double w = 1.0 / std::sqrt(order[j].first);
        weight_sum += w;
        acc += w * values[order[j].second];
    }
    return acc / weight_sum;
}

// One randomized regression tree on a bootstrap resample, splitting on
// random feature subsets of size ceil(sqrt(d)).
class RegressionTree {
public:
    RegressionTree(const PointSet& train, const std::vector<double>& values,
                   const std::vector<int>& sample, int max_depth, Rng& rng)
        : train_(train), values_(values) {
        feature_count_ = static_cast<int>(
            std::ceil(std::sqrt(static_cast<double>(train.d))));
        std::vector<int> rows = sample;
        root_ = build(rows, max_depth, rng);
    }

    double predict(const double* x) const {
        int node = root_;
        while (nodes_[node].feature >= 0) {
            node = x[nodes_[node].feature] <= nodes_[node].threshold
                       ? nodes_[node].left
                       : nodes_[node].right;
        }
        return nodes_[node].value;
    }

private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    int build(std::vector<int>& rows, int depth, Rng& rng) {
        Node node;
        double mean = 0.0;
        for (int r : rows) mean += values_[r];
        mean /= static_cast<double>(rows.size());
        node.value = mean;
        if (depth == 0 || rows.size() < 2) {
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }

        // random feature subset, then the best variance-reduction split
        std::vector<int> features(train_.d);
        std::iota(features.begin(), features.end(), 0);
        for (int i = 0; i < feature_count_; ++i) {
            const auto j =
                i + static_cast<int>(rng.uniform_int(train_.d - i));
            std::swap(features[i], features[j]);
        }

        double best_score = std::numeric_limits<double>::infinity();
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::pair<double, int>> sorted(rows.size());
        for (int fi = 0; fi < feature_count_; ++fi) {
            const int feature = features[fi];
            for (std::size_t i = 0; i < rows.size(); ++i)
                sorted[i] = {train_.at(rows[i], feature), rows[i]};
            std::sort(sorted.begin(), sorted.end());
            // prefix sums over the sorted order
            double left_sum = 0.0, left_sq = 0.0;
            double total_sum = 0.0, total_sq = 0.0;
            for (const auto& [v, r] : sorted) {
                total_sum += values_[r];
                total_sq += values_[r] * values_[r];
            }
            const auto count = static_cast<double>(rows.size());
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                const double y = values_[sorted[i].second];
                left_sum += y;
                left_sq += y * y;
                if (sorted[i].first == sorted[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = count - nl;
                const double sse_left = left_sq - left_sum * left_sum / nl;
                const double sse_right = (total_sq - left_sq) -
                                         (total_sum - left_sum) *
                                             (total_sum - left_sum) / nr;
                const double score = sse_left + sse_right;
                if (score < best_score) {
                    best_score = score;
                    best_feature = feature;
                    best_threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
                }
            }
        }
        if (best_feature < 0) {
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            if (train_.at(r, best_feature) <= best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        if (left_rows.empty() || right_rows.empty()) {
            nodes_.push_back(node);
            return static_cast<int>(nodes_.size()) - 1;
        }
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = build(left_rows, depth - 1, rng);
        node.right = build(right_rows, depth - 1, rng);
        nodes_.push_back(node);
        return static_cast<int>(nodes_.size()) - 1;
    }

    const PointSet& train_;
    const std::vector<double>& values_;
    int feature_count_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

} // namespace detail

/// Fit the configured oracle on the training set and predict at the test
/// points. The KNN oracle is deterministic; the tree ensemble averages
/// `trees` randomized trees grown on bootstrap resamples.
inline std::vector<double> fit_predict(const PointSet& train,
                                       const std::vector<double>& train_values,
                                       const PointSet& test,
                                       const OracleConfig& cfg = {}) {
    if (train.n < 1) throw std::invalid_argument("fit_predict: empty training set");
    if (train_values.size() != static_cast<std::size_t>(train.n))
        throw std::invalid_argument("fit_predict: values/points size mismatch");
    if (test.d != train.d)
        throw std::invalid_argument("fit_predict: dimension mismatch");

    std::vector<double> predictions(test.n, 0.0);
    if (cfg.kind == OracleKind::kKnn) {
        if (cfg.k < 1) throw std::invalid_argument("fit_predict: k must be >= 1");
        for (int i = 0; i < test.n; ++i)
            predictions[i] =
                detail::knn_predict(train, train_values, test.point(i), cfg.k);
        return predictions;
    }

    if (cfg.trees < 1) throw std::invalid_argument("fit_predict: trees must be >= 1");
    std::vector<int> sample(train.n);
    for (int t = 0; t < cfg.trees; ++t) {
        Rng rng(trial_seed(cfg.seed, static_cast<std::uint64_t>(t) + 1));
        for (auto& r : sample)
            r = static_cast<int>(rng.uniform_int(train.n));
        detail::RegressionTree tree(train, train_values, sample, cfg.max_depth, rng);
        for (int i = 0; i < test.n; ++i) predictions[i] += tree.predict(test.point(i));
    }
    for (auto& p : predictions) p /= static_cast<double>(cfg.trees);
    return predictions;
}

} // namespace covdesign
