#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "covdesign/design_spec.hpp"
#include "covdesign/point_set.hpp"
#include "covdesign/rng.hpp"

namespace covdesign {

enum class GeneratorMethod { kRandom, kLhs, kSobol };

struct GeneratorConfig {
    GeneratorMethod method = GeneratorMethod::kRandom;
    std::uint64_t seed = 0;
    int skip = 1; // Sobol burn-in; the all-zeros element is always skipped
};

/// N i.i.d. uniform points in [0,1)^d.
inline PointSet uniform_random(const DesignSpec& spec, std::uint64_t seed) {
    validate(spec);
    PointSet points;
    points.n = spec.n;
    points.d = spec.d;
    points.coords.resize(static_cast<std::size_t>(spec.n) * spec.d);
    Rng rng(seed);
    for (auto& c : points.coords) c = rng.uniform();
    points.meta.method = "random";
    points.meta.seed = seed;
    return points;
}

/// Latin hypercube: each dimension is a seeded permutation of the N strata,
/// jittered uniformly within the stratum.
inline PointSet lhs(const DesignSpec& spec, std::uint64_t seed) {
    validate(spec);
    PointSet points;
    points.n = spec.n;
    points.d = spec.d;
    points.coords.resize(static_cast<std::size_t>(spec.n) * spec.d);
    Rng rng(seed);
    std::vector<int> strata(spec.n);
    for (int p = 0; p < spec.d; ++p) {
        std::iota(strata.begin(), strata.end(), 0);
        for (int i = spec.n - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng.uniform_int(i + 1));
            std::swap(strata[i], strata[j]);
        }
        for (int i = 0; i < spec.n; ++i)
            points.at(i, p) = (strata[i] + rng.uniform()) / spec.n;
    }
    points.meta.method = "lhs";
    points.meta.seed = seed;
    return points;
}

namespace detail {

// Joe-Kuo direction-number parameters (s, a, m_1..m_s) for dimensions 2..8
// of the standard Sobol sequence; dimension 1 is the van der Corput base-2
// radical inverse.
struct SobolDim {
    int s;
    std::uint32_t a;
    std::uint32_t m[5];
};

inline constexpr SobolDim kSobolDims[7] = {
    {1, 0, {1, 0, 0, 0, 0}},     // dim 2
    {2, 1, {1, 3, 0, 0, 0}},     // dim 3
    {3, 1, {1, 3, 1, 0, 0}},     // dim 4
    {3, 2, {1, 1, 1, 0, 0}},     // dim 5
    {4, 1, {1, 1, 3, 3, 0}},     // dim 6
    {4, 4, {1, 3, 5, 13, 0}},    // dim 7
    {5, 2, {1, 1, 5, 5, 17}},    // dim 8
};

inline constexpr int kSobolBits = 32;

// direction integers v_k, scaled so coordinate = value / 2^32
inline std::vector<std::uint32_t> sobol_directions(int dim_index) {
    std::vector<std::uint32_t> v(kSobolBits);
    if (dim_index == 0) {
        for (int k = 0; k < kSobolBits; ++k)
            v[k] = 1u << (kSobolBits - 1 - k);
        return v;
    }
    const SobolDim& p = kSobolDims[dim_index - 1];
    std::vector<std::uint32_t> m(kSobolBits);
    for (int k = 0; k < p.s; ++k) m[k] = p.m[k];
    for (int k = p.s; k < kSobolBits; ++k) {
        std::uint32_t value = m[k - p.s] ^ (m[k - p.s] << p.s);
        for (int i = 1; i < p.s; ++i)
            if ((p.a >> (p.s - 1 - i)) & 1u) value ^= m[k - i] << i;
        m[k] = value;
    }
    for (int k = 0; k < kSobolBits; ++k)
        v[k] = m[k] << (kSobolBits - 1 - k);
    return v;
}

} // namespace detail

/// Standard Sobol sequence (Gray-code construction, published direction
/// numbers for the first 8 dimensions), returning points skip..skip+N-1.
inline PointSet sobol(const DesignSpec& spec, int skip = 1) {
    validate(spec);
    if (spec.d > 8)
        throw std::invalid_argument("sobol: direction numbers cover d <= 8 only");
    if (skip < 1)
        throw std::invalid_argument("sobol: skip must be >= 1");
    std::vector<std::vector<std::uint32_t>> directions(spec.d);
    for (int p = 0; p < spec.d; ++p) directions[p] = detail::sobol_directions(p);

    PointSet points;
    points.n = spec.n;
    points.d = spec.d;
    points.coords.resize(static_cast<std::size_t>(spec.n) * spec.d);
    const double scale = 1.0 / 4294967296.0; // 2^-32
    for (int i = 0; i < spec.n; ++i) {
        const std::uint64_t index = static_cast<std::uint64_t>(skip) + i;
        const std::uint64_t gray = index ^ (index >> 1);
        for (int p = 0; p < spec.d; ++p) {
            std::uint32_t x = 0;
            for (int b = 0; b < detail::kSobolBits; ++b)
                if ((gray >> b) & 1u) x ^= directions[p][b];
            points.at(i, p) = x * scale;
        }
    }
    points.meta.method = "sobol";
    points.meta.seed = static_cast<std::uint64_t>(skip);
    return points;
}

} // namespace covdesign
