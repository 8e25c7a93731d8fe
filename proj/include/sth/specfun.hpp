#ifndef STH_SPECFUN_HPP
#define STH_SPECFUN_HPP

// Modified Bessel functions K0, K1, I0 and the digamma function.
//
// Small arguments (x <= 2) use the logarithmic power series of K0/K1 built on
// I0/I1 and psi(k+1). Larger arguments use the trapezoidal rule on the scaled
// integral representation
//     e^x K_v(x) = int_0^inf exp(-2x sinh^2(t/2)) cosh(v t) dt,
// which converges geometrically in the step size for this entire integrand.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sth/error.hpp"

namespace sth::specfun {

struct SpecFunResult {
    double value = 0.0;
    double est_error = 0.0;
};

inline constexpr double euler_gamma = std::numbers::egamma;

/// Switch point between the series and the integral branch of K0/K1.
inline constexpr double bessel_k_series_limit = 2.0;
/// Largest argument accepted by bessel_i0 before reporting overflow.
inline constexpr double bessel_i0_max_argument = 700.0;

namespace detail {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Returns sum_k t^k/(k!)^2 * {1, psi(k+1)} and sum_k t^k/(k!(k+1)!) * {1, psi(k+1)+psi(k+2)}.
struct BesselSeries {
    double i0_sum = 0.0;
    double k0_psi_sum = 0.0;
    double i1_sum = 0.0;
    double k1_psi_sum = 0.0;
    double last_term = 0.0;
};

inline BesselSeries bessel_series(double t) {
    BesselSeries s;
    double c0 = 1.0;  // t^k/(k!)^2
    double c1 = 1.0;  // t^k/(k!(k+1)!)
    double psi_k1 = -euler_gamma;  // psi(k+1)
    for (int k = 0; k < 200; ++k) {
        const double psi_k2 = psi_k1 + 1.0 / (k + 1);
        s.i0_sum += c0;
        s.k0_psi_sum += c0 * psi_k1;
        s.i1_sum += c1;
        s.k1_psi_sum += c1 * (psi_k1 + psi_k2);
        s.last_term = c0 * (1.0 + std::abs(psi_k1));
        if (c0 < eps * eps * s.i0_sum && k > 2) break;
        c0 *= t / ((k + 1.0) * (k + 1.0));
        c1 *= t / ((k + 1.0) * (k + 2.0));
        psi_k1 = psi_k2;
    }
    return s;
}

// e^x K_v(x) for v in {0, 1} and x > bessel_k_series_limit.
inline SpecFunResult scaled_bessel_k_integral(int order, double x) {
    const double h = std::min(0.25, 0.6 / std::sqrt(x));
    double sum = 0.5;  // t = 0 contributes half weight
    double term = 1.0;
    for (int k = 1; k < 10000; ++k) {
        const double t = k * h;
        const double sh = std::sinh(0.5 * t);
        term = std::exp(-2.0 * x * sh * sh) * (order == 0 ? 1.0 : std::cosh(t));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return {h * sum, h * (term + 16.0 * eps * sum)};
}

}  // namespace detail

inline SpecFunResult bessel_k0_result(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k0: argument must be positive");
    if (x <= bessel_k_series_limit) {
        const auto s = detail::bessel_series(0.25 * x * x);
        const double log_half = std::log(0.5 * x);
        const double value = -log_half * s.i0_sum + s.k0_psi_sum;
        const double err = detail::eps * (std::abs(log_half) * s.i0_sum + std::abs(s.k0_psi_sum)) * 4.0;
        return {value, err};
    }
    if (x > 745.0) return {0.0, 0.0};
    const auto scaled = detail::scaled_bessel_k_integral(0, x);
    const double decay = std::exp(-x);
    return {scaled.value * decay, (scaled.est_error + 4.0 * detail::eps * scaled.value) * decay};
}

inline SpecFunResult bessel_k1_result(double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k1: argument must be positive");
    if (x <= bessel_k_series_limit) {
        const auto s = detail::bessel_series(0.25 * x * x);
        const double log_half = std::log(0.5 * x);
        const double i1 = 0.5 * x * s.i1_sum;
        const double value = 1.0 / x + log_half * i1 - 0.25 * x * s.k1_psi_sum;
        const double err =
            detail::eps * (1.0 / x + std::abs(log_half * i1) + std::abs(0.25 * x * s.k1_psi_sum)) * 4.0;
        return {value, err};
    }
    if (x > 745.0) return {0.0, 0.0};
    const auto scaled = detail::scaled_bessel_k_integral(1, x);
    const double decay = std::exp(-x);
    return {scaled.value * decay, (scaled.est_error + 4.0 * detail::eps * scaled.value) * decay};
}

inline SpecFunResult bessel_i0_result(double x) {
    if (!(x >= 0.0)) throw DomainError("bessel_i0: argument must be non-negative");
    if (x > bessel_i0_max_argument) throw RangeError("bessel_i0: argument overflows");
    if (x <= 30.0) {
        const double t = 0.25 * x * x;
        double term = 1.0;
        double sum = 1.0;
        for (int k = 1; k < 500; ++k) {
            term *= t / (static_cast<double>(k) * k);
            sum += term;
            if (term < detail::eps * 0.01 * sum) break;
        }
        return {sum, 4.0 * detail::eps * sum};
    }
    // Hankel expansion; all terms positive, smallest term near k = 2x is negligible here.
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        sum += term;
        if (term < detail::eps * 0.01 * sum) break;
    }
    const double value = std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * sum;
    return {value, 8.0 * detail::eps * value};
}

inline SpecFunResult digamma_result(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: argument must be positive");
    double shift = 0.0;
    double sum_abs = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        sum_abs += 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli-number asymptotic tail.
    const double tail =
        inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                        inv2 * (1.0 / 252 -
                                inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
    const double value = std::log(x) - 0.5 * inv - tail + shift;
    return {value, 4.0 * detail::eps * (std::abs(std::log(x)) + sum_abs)};
}

inline double bessel_k0(double x) { return bessel_k0_result(x).value; }
inline double bessel_k1(double x) { return bessel_k1_result(x).value; }
inline double bessel_i0(double x) { return bessel_i0_result(x).value; }
inline double digamma(double x) { return digamma_result(x).value; }

}  // namespace sth::specfun

#endif
