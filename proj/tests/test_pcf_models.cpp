#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "covdesign/pcf_models.hpp"

using namespace covdesign;

TEST_CASE("make_radial_grid builds midpoints") {
    auto grid = make_radial_grid(1.0, 5);
    REQUIRE(grid.points.size() == 5);
    CHECK(grid.points[0] == doctest::Approx(0.1));
    CHECK(grid.points[1] == doctest::Approx(0.3));
    CHECK(grid.points[2] == doctest::Approx(0.5));
    CHECK(grid.points[3] == doctest::Approx(0.7));
    CHECK(grid.points[4] == doctest::Approx(0.9));

    auto single = make_radial_grid(1.0, 1);
    CHECK(single.points[0] == doctest::Approx(0.5));

    CHECK_THROWS_AS(make_radial_grid(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(make_radial_grid(1.0, 0), std::invalid_argument);
}

TEST_CASE("pcf_pds is a closed step at r_min") {
    auto grid = make_radial_grid(1.0, 10);
    auto profile = pcf_pds(0.4, grid);
    CHECK(profile(0.2) == 0.0);  // r = 0.5 r_min
    CHECK(profile(0.4) == 1.0);  // r = r_min (closed side)
    CHECK(profile(0.8) == 1.0);  // r = 2 r_min
    CHECK_THROWS_AS(pcf_pds(0.0, grid), std::invalid_argument);
}

TEST_CASE("pcf_sfsd stair values and boundary convention") {
    auto grid = make_radial_grid(1.0, 10);
    PcfParams params;
    params.family = PcfFamily::kSfsd;
    params.r_min = 0.2;
    params.r_1 = 0.5;
    params.p0 = 1.7;
    auto profile = pcf_sfsd(params, grid);
    CHECK(profile(0.1) == 0.0);
    CHECK(profile(0.2) == 0.0);   // open at r_min, unlike pcf_pds
    CHECK(profile(0.35) == 1.7);  // peak
    CHECK(profile(0.5) == 1.7);   // closed at r_1
    CHECK(profile(0.6) == 1.0);

    params.r_1 = 0.1;
    CHECK_THROWS_AS(pcf_sfsd(params, grid), std::invalid_argument);
    params.r_1 = 0.5;
    params.p0 = 0.9;
    CHECK_THROWS_AS(pcf_sfsd(params, grid), std::invalid_argument);
}

TEST_CASE("sfsd with unit peak degenerates to the pds step") {
    auto grid = make_radial_grid(1.0, 64);
    PcfParams params;
    params.family = PcfFamily::kSfsd;
    params.r_min = 0.3;
    params.r_1 = 0.6;
    params.p0 = 1.0;
    auto stair = pcf_sfsd(params, grid);
    auto step = pcf_pds(0.3, grid);
    for (int j = 0; j < 64; ++j) {
        const double r = grid.points[j];
        if (r == 0.3) continue; // boundary conventions differ only here
        CHECK(stair.values[j] == step.values[j]);
    }
    // the documented boundary difference
    CHECK(stair(0.3) == 0.0);
    CHECK(step(0.3) == 1.0);
}

TEST_CASE("pcf_proposed peak and tail segments") {
    auto grid = make_radial_grid(1.0, 200);
    PcfParams params;
    params.family = PcfFamily::kProposed;
    params.r_min = 0.1;
    params.r_1 = 0.2;
    params.p0 = 1.4;
    params.amplitude = 0.4;
    params.decay = 0.0;
    params.frequency = 1.0;
    params.phase = 0.0;
    auto profile = pcf_proposed(params, grid);
    CHECK(profile(0.15) == 1.4);
    // at r = 0.25 with frequency 1 and phase adjusted so sin = 1:
    // G = 1 + 0.4 / 0.25 = 2.6
    params.phase = std::numbers::pi / 2.0 - 2.0 * std::numbers::pi * 1.0 * 0.25;
    profile = pcf_proposed(params, grid);
    CHECK(profile(0.25) == doctest::Approx(2.6).epsilon(1e-12));

    // zero amplitude: tail is identically 1
    params.amplitude = 0.0;
    profile = pcf_proposed(params, grid);
    CHECK(profile(0.7) == 1.0);
}

TEST_CASE("proposed with zero amplitude equals sfsd pointwise") {
    auto grid = make_radial_grid(1.0, 128);
    PcfParams params;
    params.r_min = 0.15;
    params.r_1 = 0.35;
    params.p0 = 2.0;
    params.amplitude = 0.0;
    params.family = PcfFamily::kProposed;
    auto proposed = pcf_proposed(params, grid);
    params.family = PcfFamily::kSfsd;
    auto stair = pcf_sfsd(params, grid);
    for (int j = 0; j < 128; ++j) CHECK(proposed.values[j] == stair.values[j]);
}

TEST_CASE("tail deviation is bounded by its envelope on the grid") {
    auto grid = make_radial_grid(1.0, 300);
    PcfParams params;
    params.family = PcfFamily::kProposed;
    params.r_min = 0.05;
    params.r_1 = 0.1;
    params.p0 = 1.2;
    params.amplitude = 0.09;
    params.decay = 3.0;
    params.frequency = 11.0;
    params.phase = 0.7;
    auto profile = pcf_proposed(params, grid);
    for (int j = 0; j < 300; ++j) {
        const double r = grid.points[j];
        if (r <= params.r_1) continue;
        const double envelope = params.amplitude / r * std::exp(-params.decay * r);
        CHECK(std::abs(profile.values[j] - 1.0) <= envelope + 1e-12);
    }
}

TEST_CASE("pcf_proposed rejects oscillations that go negative") {
    auto grid = make_radial_grid(1.0, 200);
    PcfParams params;
    params.family = PcfFamily::kProposed;
    params.r_min = 0.05;
    params.r_1 = 0.1;
    params.p0 = 1.2;
    params.amplitude = 0.9; // amplitude/r ~ 6 just past the peak
    params.decay = 2.0;
    params.frequency = 40.0;
    CHECK_THROWS_AS(pcf_proposed(params, grid), std::invalid_argument);
}

TEST_CASE("profile validation rejects negative values and size mismatch") {
    auto grid = make_radial_grid(1.0, 4);
    RadialProfile profile;
    profile.grid = grid;
    profile.values = {0.0, 1.0, -0.1, 1.0};
    CHECK_THROWS_AS(validate(profile), std::invalid_argument);
    profile.values = {1.0, 1.0};
    CHECK_THROWS_AS(validate(profile), std::invalid_argument);
}
