#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covdesign/synthesis.hpp"

using namespace covdesign;

namespace {

PointSet make_points(int d, std::initializer_list<double> coords) {
    PointSet points;
    points.d = d;
    points.coords = coords;
    points.n = static_cast<int>(points.coords.size()) / d;
    return points;
}

// independent evaluation of the matching objective for finite differences
double objective_oracle(const PointSet& points, const RadialProfile& target,
                        const EstimatorConfig& cfg) {
    auto estimate = estimate_pcf(points, target.grid, cfg);
    double total = 0.0;
    for (int j = 0; j < target.grid.m; ++j) {
        const double diff = estimate.values[j] - target.values[j];
        total += diff * diff;
    }
    return total;
}

} // namespace

TEST_CASE("min_pairwise_distance basics") {
    auto points = make_points(2, {0.0, 0.0, 0.3, 0.4});
    CHECK(min_pairwise_distance(points) == doctest::Approx(0.5).epsilon(1e-12));
    auto dup = make_points(2, {0.2, 0.2, 0.2, 0.2, 0.7, 0.7});
    CHECK(min_pairwise_distance(dup) == 0.0);
    auto single = make_points(2, {0.5, 0.5});
    CHECK_THROWS_AS(min_pairwise_distance(single), std::invalid_argument);
}

TEST_CASE("estimate_pcf matches the hand evaluation for a single pair") {
    // two points at distance r0, evaluated exactly at a grid midpoint r0
    auto grid = make_radial_grid(1.0, 100);
    const double r0 = grid.points[20]; // 0.205
    auto points = make_points(2, {0.1, 0.5, 0.1 + r0, 0.5});
    EstimatorConfig cfg;
    auto profile = estimate_pcf(points, grid, cfg);

    const double sigma = 0.25 * grid.spacing();
    const double k0 = 1.0 / (std::sqrt(std::numbers::pi) * sigma);
    const double gamma_w = 1.0 - 4.0 / std::numbers::pi * r0;
    const double s_e = 2.0 * std::numbers::pi * r0;
    const double expected = (1.0 / gamma_w) * (1.0 / 2.0) * (1.0 / (s_e * 1.0)) *
                            2.0 * k0;
    CHECK(profile.values[20] == doctest::Approx(expected).epsilon(1e-12));

    SUBCASE("kernel support is compact") {
        // every grid point farther than 4 sigma from the pair distance is 0
        for (int j = 0; j < grid.m; ++j) {
            if (std::abs(grid.points[j] - r0) > 4.0 * sigma)
                CHECK(profile.values[j] == 0.0);
        }
    }
    SUBCASE("fewer than two points is an error") {
        auto one = make_points(2, {0.5, 0.5});
        CHECK_THROWS_AS(estimate_pcf(one, grid, cfg), std::invalid_argument);
    }
}

TEST_CASE("estimate_pcf of uniform points is near one away from the origin") {
    // CSR has unit PCF; average the estimate over seeds in the outer half
    // of the window
    const int n = 500;
    auto grid = make_radial_grid(0.15, 100);
    EstimatorConfig cfg;
    double acc = 0.0;
    int count = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        PointSet points;
        points.n = n;
        points.d = 2;
        points.coords.resize(2 * n);
        Rng rng(900 + seed);
        for (auto& c : points.coords) c = rng.uniform();
        auto profile = estimate_pcf(points, grid, cfg);
        for (int j = grid.m / 2; j < grid.m; ++j) {
            acc += profile.values[j];
            ++count;
        }
    }
    CHECK(acc / count == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("pcf_gradient matches central finite differences") {
    const double h = 1e-6;
    int checked = 0;
    for (int d = 2; d <= 5; ++d) {
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            PointSet points;
            points.n = 10;
            points.d = d;
            points.coords.resize(10 * d);
            Rng rng(33 * d + seed);
            for (auto& c : points.coords) c = rng.uniform();

            DesignSpec spec{10, d};
            auto grid = make_radial_grid(3.0 * reference_radius(spec), 60);
            auto target = pcf_pds(reference_radius(spec), grid);
            EstimatorConfig cfg;

            const int i = static_cast<int>(seed) % 10;
            auto grad = pcf_gradient(points, i, target, cfg);

            double norm_an = 0.0, norm_diff = 0.0;
            for (int p = 0; p < d; ++p) {
                PointSet plus = points;
                PointSet minus = points;
                plus.at(i, p) += h;
                minus.at(i, p) -= h;
                const double fd = (objective_oracle(plus, target, cfg) -
                                   objective_oracle(minus, target, cfg)) /
                                  (2.0 * h);
                norm_an += grad[p] * grad[p];
                norm_diff += (grad[p] - fd) * (grad[p] - fd);
            }
            REQUIRE(norm_an > 0.0);
            CHECK(std::sqrt(norm_diff) <= 1e-5 * std::sqrt(norm_an));
            ++checked;
        }
    }
    CHECK(checked == 12);
}

TEST_CASE("pcf_gradient symmetry and stationarity") {
    auto grid = make_radial_grid(1.0, 80);
    auto points = make_points(2, {0.3, 0.5, 0.62, 0.5});
    EstimatorConfig cfg;

    SUBCASE("two-point gradients are opposite") {
        auto target = pcf_pds(0.4, grid);
        auto g0 = pcf_gradient(points, 0, target, cfg);
        auto g1 = pcf_gradient(points, 1, target, cfg);
        for (int p = 0; p < 2; ++p)
            CHECK(g0[p] == doctest::Approx(-g1[p]).epsilon(1e-12));
    }
    SUBCASE("zero gradient when the estimate equals the target") {
        auto target = estimate_pcf(points, grid, cfg);
        auto g0 = pcf_gradient(points, 0, target, cfg);
        for (int p = 0; p < 2; ++p) CHECK(g0[p] == 0.0);
    }
    SUBCASE("bad index is rejected") {
        auto target = pcf_pds(0.4, grid);
        CHECK_THROWS_AS(pcf_gradient(points, 5, target, cfg), std::invalid_argument);
    }
}

TEST_CASE("adaptive learning rate formula") {
    CHECK(alr_rate(1) == doctest::Approx(0.090484).epsilon(1e-5));
    CHECK(alr_rate(100) == doctest::Approx(0.1 * std::exp(-1.0)).epsilon(1e-12));
    CHECK(alr_rate(2) < alr_rate(1));
}

TEST_CASE("synthesize is deterministic, in bounds, and reduces the objective") {
    DesignSpec spec{80, 2};
    auto grid = default_radial_grid(spec, 120);
    PcfParams params;
    params.family = PcfFamily::kSfsd;
    params.r_min = 0.9 * reference_radius(spec);
    params.r_1 = 1.2 * params.r_min;
    params.p0 = 1.3;
    auto target = pcf_sfsd(params, grid);

    SynthesisConfig cfg;
    cfg.t_max = 120;
    cfg.seed = 7;
    auto [points, trace] = synthesize(target, spec, cfg);
    REQUIRE(points.n == 80);
    for (double c : points.coords) {
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    REQUIRE(static_cast<int>(trace.objective.size()) == cfg.t_max);
    CHECK(trace.objective.back() < trace.initial_objective);

    auto [points2, trace2] = synthesize(target, spec, cfg);
    CHECK(points.coords == points2.coords);
    CHECK(trace.objective == trace2.objective);
}

TEST_CASE("synthesis clears the coverage region early") {
    // the residual below r_min collapses well before the full budget
    DesignSpec spec{200, 4};
    auto grid = default_radial_grid(spec);
    PcfParams params;
    params.family = PcfFamily::kSfsd;
    params.r_min = 1.1 * reference_radius(spec);
    params.r_1 = 1.3 * params.r_min;
    params.p0 = 1.3;
    auto target = pcf_sfsd(params, grid);
    SynthesisConfig cfg;
    cfg.t_max = 300;
    cfg.seed = 3;
    auto [points, trace] = synthesize(target, spec, cfg);
    (void)points;
    const double initial = trace.initial_coverage_objective;
    const double halfway = trace.coverage_objective[cfg.t_max / 2 - 1];
    REQUIRE(initial > 0.0);
    CHECK(halfway <= 0.1 * initial);
    // the coverage residual settles while the full objective is still moving
    CHECK(trace.coverage_objective.back() < trace.objective.back());
}

TEST_CASE("dart throwing") {
    DesignSpec spec{40, 2};
    SUBCASE("zero radius accepts every uniform candidate") {
        auto points = dart_throwing(0.0, spec, 1000, 5);
        CHECK(points.n == 40);
        validate(points);
    }
    SUBCASE("accepted sets respect the disk constraint") {
        const double r_min = 0.08;
        auto points = dart_throwing(r_min, spec, 100000, 11);
        CHECK(points.n == 40);
        CHECK(min_pairwise_distance(points) >= r_min);
    }
    SUBCASE("impossible packings raise a partial-design error") {
        DesignSpec five{5, 2};
        // five points with pairwise distance 0.9 cannot fit in the unit square
        CHECK_THROWS_AS(dart_throwing(0.9, five, 20000, 1), partial_design_error);
        try {
            dart_throwing(0.9, five, 20000, 1);
        } catch (const partial_design_error& e) {
            CHECK(e.achieved() < 5);
            CHECK(e.achieved() >= 1);
        }
    }
}
