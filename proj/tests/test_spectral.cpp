#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covdesign/bessel.hpp"
#include "covdesign/pcf_models.hpp"
#include "covdesign/spectral.hpp"

using namespace covdesign;

TEST_CASE("spectral grid construction and validation") {
    auto grid = make_spectral_grid(1.0, 10.0, 10);
    CHECK(grid.points.front() == doctest::Approx(1.0));
    CHECK(grid.points.back() == doctest::Approx(10.0));
    CHECK(grid.points[1] == doctest::Approx(2.0));
    CHECK_THROWS_AS(make_spectral_grid(0.0, 5.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_spectral_grid(2.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_spectral_grid(1.0, 5.0, 1), std::invalid_argument);
}

TEST_CASE("poisson pcf maps to unit psd in every dimension") {
    auto grid = make_radial_grid(0.3, 100);
    RadialProfile poisson;
    poisson.grid = grid;
    poisson.values.assign(100, 1.0);
    poisson.analytic = [](double) { return 1.0; };
    auto k_grid = make_spectral_grid(1.0, 100.0, 64);
    for (int d = 2; d <= 8; ++d) {
        auto psd = pcf_to_psd(poisson, 500, d, k_grid);
        for (double p : psd.values) CHECK(p == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("pds psd matches the closed form in d = 2") {
    // P(k) = 1 - 2 pi N r J1(k r) / k for the step profile
    const int n = 200;
    DesignSpec spec{n, 2};
    const double r_min = reference_radius(spec);
    auto grid = make_radial_grid(3.0 * r_min, 200);
    auto profile = pcf_pds(r_min, grid);
    auto k_grid = default_spectral_grid(spec, 300);
    auto psd = pcf_to_psd(profile, n, 2, k_grid);
    for (int j = 0; j < k_grid.m_k; ++j) {
        const double k = k_grid.points[j];
        const double closed =
            1.0 - 2.0 * std::numbers::pi * n * r_min * bessel_j(1.0, k * r_min) / k;
        CHECK(std::abs(psd.values[j] - closed) / std::abs(closed) < 1e-4);
    }
}

TEST_CASE("psd of any profile approaches one at large k") {
    DesignSpec spec{300, 3};
    const double r_min = reference_radius(spec);
    auto grid = make_radial_grid(3.0 * r_min, 150);
    PcfParams params;
    params.family = PcfFamily::kSfsd;
    params.r_min = 0.8 * r_min;
    params.r_1 = 1.4 * r_min;
    params.p0 = 1.5;
    auto profile = pcf_sfsd(params, grid);
    auto k_grid = make_spectral_grid(1.0, 40.0 / r_min, 400);
    auto psd = pcf_to_psd(profile, spec.n, spec.d, k_grid);
    // average |P - 1| over the top decile of frequencies
    double acc = 0.0;
    int count = 0;
    for (int j = 9 * k_grid.m_k / 10; j < k_grid.m_k; ++j) {
        acc += std::abs(psd.values[j] - 1.0);
        ++count;
    }
    CHECK(acc / count < 0.05);
    CHECK_THROWS_AS(pcf_to_psd(profile, spec.n, 9, k_grid), std::invalid_argument);
}

TEST_CASE("empirical psd direct evaluations") {
    PointSet two;
    two.n = 2;
    two.d = 2;
    two.coords = {0.0, 0.0, 0.5, 0.0};
    auto k_grid = make_spectral_grid(2.0, 4.0, 2);

    SUBCASE("two points half a unit apart give P = 2 at k = 2 along the axis") {
        auto psd = empirical_psd_directions(two, k_grid, {{1.0, 0.0}});
        // S(2) = 1 + exp(-2 pi i 2 * 0.5) = 2, P = |2|^2 / 2
        CHECK(psd.values[0] == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("single point has unit psd everywhere") {
        PointSet one;
        one.n = 1;
        one.d = 2;
        one.coords = {0.3, 0.9};
        auto psd = empirical_psd(one, k_grid, 5, 42);
        for (double p : psd.values) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("k -> 0 diagnostic recovers N") {
        // all phases are unity at zero frequency: P = N^2 / N = N
        auto tiny = make_spectral_grid(1e-12, 1e-11, 2);
        auto psd = empirical_psd_directions(two, tiny, {{0.0, 1.0}});
        CHECK(psd.values[0] == doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("empty point set is rejected") {
        PointSet empty;
        empty.n = 0;
        empty.d = 2;
        CHECK_THROWS_AS(empirical_psd(empty, k_grid, 3, 1), std::invalid_argument);
    }
}

TEST_CASE("empirical psd is deterministic in the seed") {
    PointSet points;
    points.n = 40;
    points.d = 3;
    Rng rng(7);
    points.coords.resize(120);
    for (auto& c : points.coords) c = rng.uniform();
    auto k_grid = make_spectral_grid(1.0, 30.0, 50);
    auto a = empirical_psd(points, k_grid, 8, 99);
    auto b = empirical_psd(points, k_grid, 8, 99);
    for (int j = 0; j < 50; ++j) CHECK(a.values[j] == b.values[j]);
}

TEST_CASE("check_realizability classifies step designs") {
    DesignSpec spec{1000, 2};
    auto k_grid = default_spectral_grid(spec, 400);

    SUBCASE("poisson is feasible with unit minimum") {
        auto grid = make_radial_grid(0.1, 50);
        RadialProfile poisson;
        poisson.grid = grid;
        poisson.values.assign(50, 1.0);
        poisson.analytic = [](double) { return 1.0; };
        auto report = check_realizability(poisson, spec.n, spec.d, k_grid);
        CHECK(report.feasible);
        CHECK(report.min_power == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("a grossly oversized disk is infeasible") {
        auto grid = make_radial_grid(1.5, 200);
        auto profile = pcf_pds(0.5, grid);
        auto report = check_realizability(profile, spec.n, spec.d, k_grid);
        CHECK_FALSE(report.feasible);
        CHECK(report.min_power < 0.0);
    }
    SUBCASE("argmin is always a grid point") {
        auto grid = make_radial_grid(1.5, 200);
        auto profile = pcf_pds(0.5, grid);
        auto report = check_realizability(profile, spec.n, spec.d, k_grid);
        bool found = false;
        for (double k : k_grid.points)
            if (k == report.argmin_k) found = true;
        CHECK(found);
    }
}
