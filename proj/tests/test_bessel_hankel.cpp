#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "covdesign/bessel.hpp"
#include "covdesign/pcf_models.hpp"
#include "covdesign/spectral.hpp"

using namespace covdesign;

namespace {

// Independent oracle for integer orders: Bessel's integral representation
// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt, evaluated by a dense
// trapezoid rule (the integrand is periodic-smooth, so this converges fast).
double bessel_integral_oracle(int n, double x) {
    const int steps = 20000;
    const double h = std::numbers::pi / steps;
    double sum = 0.5 * (std::cos(0.0) + std::cos(n * std::numbers::pi));
    for (int i = 1; i < steps; ++i) {
        const double t = i * h;
        sum += std::cos(n * t - x * std::sin(t));
    }
    return sum * h / std::numbers::pi;
}

// Independent oracle for half-integer orders: explicit spherical forms.
double bessel_half_oracle(double order, double x) {
    const double f = std::sqrt(2.0 / (std::numbers::pi * x));
    const double s = std::sin(x);
    const double c = std::cos(x);
    if (order == 0.5) return f * s;
    if (order == 1.5) return f * (s / x - c);
    if (order == 2.5) return f * ((3.0 / (x * x) - 1.0) * s - 3.0 * c / x);
    // order 3.5
    return f * ((15.0 / (x * x * x) - 6.0 / x) * s -
                (15.0 / (x * x) - 1.0) * c);
}

} // namespace

TEST_CASE("bessel_j matches series constants at zero") {
    CHECK(bessel_j(0.0, 0.0) == 1.0);
    CHECK(bessel_j(1.0, 0.0) == 0.0);
    CHECK(bessel_j(0.5, 0.0) == 0.0);
    CHECK(bessel_j(3.0, 0.0) == 0.0);
}

TEST_CASE("bessel_j vanishes at the first J0 zero") {
    CHECK(std::abs(bessel_j(0.0, 2.404826)) < 1e-5);
    // the zero itself to full precision
    CHECK(std::abs(bessel_j(0.0, 2.404825557695773)) < 1e-12);
}

TEST_CASE("bessel_j integer orders agree with the integral representation") {
    for (int n : {0, 1, 2, 3}) {
        for (double x : {0.1, 0.5, 1.0, 3.0, 7.0, 11.9, 12.1, 25.0, 80.0, 250.0, 1000.0}) {
            const double expected = bessel_integral_oracle(n, x);
            CHECK(std::abs(bessel_j(n, x) - expected) < 1e-10);
        }
    }
}

TEST_CASE("bessel_j half-integer orders agree with spherical closed forms") {
    for (double nu : {0.5, 1.5, 2.5, 3.5}) {
        for (double x : {0.2, 1.0, 5.0, 11.5, 13.0, 100.0, 900.0}) {
            const double expected = bessel_half_oracle(nu, x);
            CHECK(std::abs(bessel_j(nu, x) - expected) < 1e-10);
        }
    }
}

TEST_CASE("bessel_j rejects unsupported orders and negative arguments") {
    CHECK_THROWS_AS(bessel_j(0.25, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(4.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bessel_j(0.0, -0.5), std::invalid_argument);
}

TEST_CASE("hankel_transform of zero profile is zero") {
    auto grid = make_radial_grid(1.0, 50);
    RadialProfile zero;
    zero.grid = grid;
    zero.values.assign(50, 0.0);
    for (double k : {0.5, 2.0, 40.0})
        CHECK(hankel_transform(zero, 0.0, k, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(hankel_transform(zero, 0.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("hankel_transform of an indicator matches R J1(kR)/k") {
    // f = 1 on [0, R]: int_0^R r J_0(k r) dr = R J_1(k R) / k
    const double R = 0.35;
    auto grid = make_radial_grid(1.0, 100);
    RadialProfile box;
    box.grid = grid;
    box.analytic = [R](double r) { return r <= R ? 1.0 : 0.0; };
    box.breakpoints = {R};
    box.values.resize(100);
    for (int j = 0; j < 100; ++j) box.values[j] = box.analytic(grid.points[j]);
    for (double k : {0.7, 3.0, 17.0, 90.0, 400.0}) {
        const double expected = R * bessel_j(1.0, k * R) / k;
        CHECK(hankel_transform(box, 0.0, k, 1.0) ==
              doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("hankel_transform is linear") {
    auto grid = make_radial_grid(2.0, 80);
    RadialProfile f;
    f.grid = grid;
    f.analytic = [](double r) { return std::exp(-1.7 * r); };
    f.values.resize(80);
    for (int j = 0; j < 80; ++j) f.values[j] = f.analytic(grid.points[j]);
    RadialProfile g;
    g.grid = grid;
    g.analytic = [](double r) { return r * r; };
    g.values.resize(80);
    for (int j = 0; j < 80; ++j) g.values[j] = g.analytic(grid.points[j]);

    const double alpha = 0.6;
    const double beta = -2.3;
    RadialProfile combo;
    combo.grid = grid;
    combo.analytic = [&](double r) { return alpha * f.analytic(r) + beta * g.analytic(r); };
    combo.values.resize(80);
    for (int j = 0; j < 80; ++j) combo.values[j] = combo.analytic(grid.points[j]);

    for (double k : {1.0, 6.0, 33.0}) {
        const double lhs = hankel_transform(combo, 1.0, k, 2.0);
        const double rhs = alpha * hankel_transform(f, 1.0, k, 2.0) +
                           beta * hankel_transform(g, 1.0, k, 2.0);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}
