#pragma once

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>

namespace covdesign {

namespace detail {

// Coefficient tables for one Bessel order: the ascending-series prefactor and
// the Hankel asymptotic-expansion coefficients a_k(nu).
struct BesselTables {
    double gamma_nu_plus_1;
    double chi_shift; // (nu/2 + 1/4) * pi
    double coeff[32]; // a_k = prod_{j<=k} (4nu^2 - (2j-1)^2) / (k! 8^k)
};

inline BesselTables make_bessel_tables(double nu) {
    BesselTables t{};
    t.gamma_nu_plus_1 = std::tgamma(nu + 1.0);
    t.chi_shift = (0.5 * nu + 0.25) * std::numbers::pi;
    const double mu = 4.0 * nu * nu;
    double a = 1.0;
    t.coeff[0] = a;
    for (int k = 1; k < 32; ++k) {
        const double odd = 2.0 * k - 1.0;
        a *= (mu - odd * odd) / (8.0 * k);
        t.coeff[k] = a;
    }
    return t;
}

// Supported orders are multiples of 1/2 in [0, 4]; index by 2*order.
inline const BesselTables& bessel_tables(int twice_order) {
    static const BesselTables tables[9] = {
        make_bessel_tables(0.0), make_bessel_tables(0.5),
        make_bessel_tables(1.0), make_bessel_tables(1.5),
        make_bessel_tables(2.0), make_bessel_tables(2.5),
        make_bessel_tables(3.0), make_bessel_tables(3.5),
        make_bessel_tables(4.0)};
    return tables[twice_order];
}

inline constexpr double kBesselSeriesCutoff = 12.0;

inline double bessel_series(double nu, const BesselTables& t, double x) {
    // ascending series: sum_m (-1)^m (x/2)^(2m+nu) / (m! Gamma(m+nu+1))
    const double half = 0.5 * x;
    double term = std::pow(half, nu) / t.gamma_nu_plus_1;
    double sum = term;
    const double q = half * half;
    for (int m = 1; m < 80; ++m) {
        term *= -q / (m * (m + nu));
        sum += term;
        if (std::abs(term) < 1e-19 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

inline double bessel_asymptotic(const BesselTables& t, double x) {
    // J_nu(x) ~ sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)], chi = x - shift.
    // For half-integer orders the expansion terminates and is exact.
    const double inv_x = 1.0 / x;
    double p_sum = 0.0;
    double q_sum = 0.0;
    double power = 1.0; // x^-k
    double prev = std::abs(t.coeff[0]);
    for (int k = 0; k < 32; ++k) {
        const double term = t.coeff[k] * power;
        const double mag = std::abs(term);
        if (k > 0 && (mag > prev || mag < 1e-19)) break;
        prev = mag;
        switch (k & 3) {
        case 0: p_sum += term; break;
        case 1: q_sum += term; break;
        case 2: p_sum -= term; break;
        default: q_sum -= term; break;
        }
        power *= inv_x;
    }
    const double chi = x - t.chi_shift;
    return std::sqrt(2.0 / (std::numbers::pi * x)) *
           (p_sum * std::cos(chi) - q_sum * std::sin(chi));
}

} // namespace detail

/// Bessel function of the first kind for one fixed order, reusing the
/// per-order coefficient tables. Orders are multiples of 1/2 in [0, 4],
/// which covers the transform kernels for dimensions 2..8 and the
/// half-step-up orders appearing in closed-form identities.
class BesselJ {
public:
    explicit BesselJ(double order) : order_(order) {
        const double doubled = 2.0 * order;
        const int idx = static_cast<int>(doubled);
        if (order < 0.0 || order > 4.0 || doubled != idx)
            throw std::invalid_argument("bessel_j: unsupported order");
        tables_ = &detail::bessel_tables(idx);
    }

    double operator()(double x) const {
        if (x < 0.0) throw std::invalid_argument("bessel_j: negative argument");
        if (x == 0.0) return order_ == 0.0 ? 1.0 : 0.0;
        if (x < detail::kBesselSeriesCutoff)
            return detail::bessel_series(order_, *tables_, x);
        return detail::bessel_asymptotic(*tables_, x);
    }

    double order() const noexcept { return order_; }

private:
    double order_;
    const detail::BesselTables* tables_;
};

/// J_order(x) for order in {0, 0.5, ..., 4}, x >= 0.
inline double bessel_j(double order, double x) { return BesselJ(order)(x); }

} // namespace covdesign
