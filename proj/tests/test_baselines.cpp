#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "covdesign/baselines.hpp"

using namespace covdesign;

namespace {

// brute-force star-discrepancy estimate on a grid of anchored boxes
double star_discrepancy(const PointSet& points, int resolution) {
    double worst = 0.0;
    for (int a = 1; a <= resolution; ++a) {
        for (int b = 1; b <= resolution; ++b) {
            const double ux = static_cast<double>(a) / resolution;
            const double uy = static_cast<double>(b) / resolution;
            int inside = 0;
            for (int i = 0; i < points.n; ++i)
                if (points.at(i, 0) < ux && points.at(i, 1) < uy) ++inside;
            const double fraction = static_cast<double>(inside) / points.n;
            worst = std::max(worst, std::abs(fraction - ux * uy));
        }
    }
    return worst;
}

} // namespace

TEST_CASE("uniform_random determinism, bounds, and mean") {
    DesignSpec spec{10000, 2};
    auto a = uniform_random(spec, 42);
    auto b = uniform_random(spec, 42);
    CHECK(a.coords == b.coords);
    validate(a);
    for (double c : a.coords) CHECK(c < 1.0);

    // per-dimension mean within 3 sigma of 1/2 (variance 1/12)
    const double bound = 3.0 / std::sqrt(12.0 * spec.n);
    for (int p = 0; p < spec.d; ++p) {
        double mean = 0.0;
        for (int i = 0; i < spec.n; ++i) mean += a.at(i, p);
        mean /= spec.n;
        CHECK(std::abs(mean - 0.5) < bound);
    }
}

TEST_CASE("lhs stratification is exact in every dimension") {
    DesignSpec spec{64, 4};
    auto points = lhs(spec, 9);
    validate(points);
    for (int p = 0; p < spec.d; ++p) {
        std::set<int> strata;
        for (int i = 0; i < spec.n; ++i) {
            const int stratum = static_cast<int>(points.at(i, p) * spec.n);
            CHECK(points.at(i, p) < 1.0);
            strata.insert(stratum);
        }
        CHECK(static_cast<int>(strata.size()) == spec.n); // each exactly once
    }
    auto again = lhs(spec, 9);
    CHECK(points.coords == again.coords);

    DesignSpec tiny{2, 3};
    auto pair = lhs(tiny, 5);
    validate(pair);
}

TEST_CASE("sobol leading dimension follows the radical-inverse order") {
    DesignSpec spec{3, 2};
    auto points = sobol(spec, 1);
    CHECK(points.at(0, 0) == doctest::Approx(0.5));
    CHECK(points.at(1, 0) == doctest::Approx(0.75));
    CHECK(points.at(2, 0) == doctest::Approx(0.25));

    auto again = sobol(spec, 1);
    CHECK(points.coords == again.coords);

    DesignSpec wide{4, 8};
    validate(sobol(wide, 3));

    CHECK_THROWS_AS(sobol(DesignSpec{4, 9}, 1), std::invalid_argument);
    CHECK_THROWS_AS(sobol(spec, 0), std::invalid_argument);
}

TEST_CASE("sobol beats the mean random star discrepancy") {
    DesignSpec spec{256, 2};
    const double sobol_disc = star_discrepancy(sobol(spec, 1), 64);
    double random_acc = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        random_acc += star_discrepancy(uniform_random(spec, 100 + seed), 64);
    CHECK(sobol_disc < random_acc / 20.0);
}

TEST_CASE("sobol points spread one per stratum in early blocks") {
    // the first 2^m points of any dimension hit each dyadic interval once
    DesignSpec spec{8, 5};
    auto points = sobol(spec, 8); // one full block, indices 8..15
    for (int p = 0; p < spec.d; ++p) {
        std::set<int> cells;
        for (int i = 0; i < spec.n; ++i)
            cells.insert(static_cast<int>(points.at(i, p) * 8.0));
        CHECK(static_cast<int>(cells.size()) == 8);
    }
}
