#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace covdesign {

/// Provenance of a generated point set.
struct PointSetMeta {
    std::string method;
    std::uint64_t seed = 0;
    std::string params; // generating parameters, key=value pairs
};

/// N points in the d-dimensional unit cube, row-major.
struct PointSet {
    int n = 0;
    int d = 0;
    std::vector<double> coords;
    PointSetMeta meta;

    double* point(int i) { return coords.data() + static_cast<std::size_t>(i) * d; }
    const double* point(int i) const {
        return coords.data() + static_cast<std::size_t>(i) * d;
    }
    double& at(int i, int p) { return coords[static_cast<std::size_t>(i) * d + p]; }
    double at(int i, int p) const {
        return coords[static_cast<std::size_t>(i) * d + p];
    }
};

inline void validate(const PointSet& points) {
    if (points.n < 0 || points.d < 1)
        throw std::invalid_argument("PointSet: invalid shape");
    if (points.coords.size() !=
        static_cast<std::size_t>(points.n) * static_cast<std::size_t>(points.d))
        throw std::invalid_argument("PointSet: coords size mismatch");
    for (double c : points.coords)
        if (!(c >= 0.0) || !(c <= 1.0))
            throw std::invalid_argument("PointSet: coordinate outside [0,1]");
}

inline double distance(const PointSet& points, int i, int j) {
    const double* a = points.point(i);
    const double* b = points.point(j);
    double sq = 0.0;
    for (int p = 0; p < points.d; ++p) {
        const double diff = a[p] - b[p];
        sq += diff * diff;
    }
    return std::sqrt(sq);
}

/// Minimum Euclidean distance over all unordered pairs. Requires n >= 2.
inline double min_pairwise_distance(const PointSet& points) {
    if (points.n < 2)
        throw std::invalid_argument("min_pairwise_distance: need at least 2 points");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < points.n; ++i)
        for (int j = i + 1; j < points.n; ++j)
            best = std::min(best, distance(points, i, j));
    return best;
}

} // namespace covdesign
