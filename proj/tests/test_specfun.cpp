#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "sth/error.hpp"
#include "sth/specfun.hpp"

namespace sf = sth::specfun;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(Specfun, ReferenceValues) {
    EXPECT_LT(rel(sf::bessel_k0(1.0), 0.42102443824070834), 1e-13);
    EXPECT_LT(rel(sf::bessel_k1(1.0), 0.60190723019723457), 1e-13);
    EXPECT_LT(rel(sf::bessel_i0(1.0), 1.2660658777520082), 1e-14);
    EXPECT_LT(rel(sf::bessel_i0(2.0), 2.2795853023360673), 1e-14);
    EXPECT_LT(rel(sf::digamma(10.0), 2.2517525890667211), 1e-14);
    EXPECT_LT(rel(sf::digamma(1.0), -sf::euler_gamma), 1e-14);
}

TEST(Specfun, BesselKMatchesBoostAcrossRange) {
    for (double x = 1e-6; x < 700.0; x *= 1.37) {
        EXPECT_LT(rel(sf::bessel_k0(x), oracle::k0(x)), 1e-12) << "x=" << x;
        EXPECT_LT(rel(sf::bessel_k1(x), oracle::k1(x)), 1e-12) << "x=" << x;
    }
}

TEST(Specfun, BesselI0MatchesBoostAcrossRange) {
    for (double x = 0.0; x < 700.0; x = x * 1.3 + 0.01) {
        EXPECT_LT(rel(sf::bessel_i0(x), oracle::i0(x)), 1e-12) << "x=" << x;
    }
}

TEST(Specfun, DigammaMatchesBoost) {
    for (double x = 1e-3; x < 1e6; x *= 1.9) {
        EXPECT_LT(std::abs(sf::digamma(x) - oracle::digamma(x)), 1e-12 * std::max(1.0, std::abs(oracle::digamma(x))))
            << "x=" << x;
    }
}

TEST(Specfun, DigammaRecurrence) {
    gen::Source src(11);
    for (int i = 0; i < 200; ++i) {
        const double x = src.log_uniform(1e-2, 1e4);
        const double lhs = sf::digamma(x + 1.0);
        const double rhs = sf::digamma(x) + 1.0 / x;
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << "x=" << x;
    }
}

TEST(Specfun, DerivativeIdentityK0PrimeIsMinusK1) {
    gen::Source src(12);
    for (int i = 0; i < 100; ++i) {
        const double x = src.log_uniform(0.05, 50.0);
        const double h = 1e-5 * x;
        const double d = (sf::bessel_k0(x + h) - sf::bessel_k0(x - h)) / (2.0 * h);
        EXPECT_LT(rel(-d, sf::bessel_k1(x)), 1e-7) << "x=" << x;
    }
}

TEST(Specfun, WronskianWithI) {
    // I0 K1 + I1 K0 = 1/x, with I1 from the oracle.
    for (double x : {0.1, 0.7, 1.9, 2.1, 5.0, 20.0, 80.0}) {
        const double w = sf::bessel_i0(x) * sf::bessel_k1(x) + oracle::i1(x) * sf::bessel_k0(x);
        EXPECT_LT(rel(w, 1.0 / x), 1e-12) << "x=" << x;
    }
}

TEST(Specfun, BranchesAgreeAtSwitchPoint) {
    const double x = sf::bessel_k_series_limit;
    const double i0 = sf::detail::scaled_bessel_k_integral(0, x).value * std::exp(-x);
    const double i1 = sf::detail::scaled_bessel_k_integral(1, x).value * std::exp(-x);
    EXPECT_LT(rel(sf::bessel_k0(x), i0), 1e-12);
    EXPECT_LT(rel(sf::bessel_k1(x), i1), 1e-12);
    // Continuity across the switch.
    const double below = std::nextafter(x, 0.0);
    const double above = std::nextafter(x, 10.0);
    EXPECT_LT(rel(sf::bessel_k0(below), sf::bessel_k0(above)), 1e-12);
    EXPECT_LT(rel(sf::bessel_k1(below), sf::bessel_k1(above)), 1e-12);
}

TEST(Specfun, ErrorEstimatesAreHonest) {
    for (double x : {0.3, 1.0, 3.0, 30.0}) {
        const auto r = sf::bessel_k0_result(x);
        EXPECT_LE(std::abs(r.value - oracle::k0(x)), std::max(r.est_error, 1e-15 * r.value) * 10.0);
    }
}

TEST(Specfun, DomainAndRange) {
    EXPECT_THROW(sf::bessel_k0(0.0), sth::DomainError);
    EXPECT_THROW(sf::bessel_k1(-1.0), sth::DomainError);
    EXPECT_THROW(sf::bessel_i0(-1.0), sth::DomainError);
    EXPECT_THROW(sf::bessel_i0(701.0), sth::RangeError);
    EXPECT_THROW(sf::digamma(0.0), sth::DomainError);
    EXPECT_THROW(sf::digamma(-2.5), sth::DomainError);
    EXPECT_EQ(sf::bessel_k0(800.0), 0.0);
    EXPECT_EQ(sf::bessel_i0(0.0), 1.0);
}

TEST(Specfun, SmallArgumentLogBehaviour) {
    // K0(x) ~ -ln(x/2) - gamma, K1(x) ~ 1/x as x -> 0.
    const double x = 1e-10;
    EXPECT_NEAR(sf::bessel_k0(x), -std::log(x / 2.0) - sf::euler_gamma, 1e-12);
    EXPECT_LT(rel(sf::bessel_k1(x), 1.0 / x), 1e-12);
}
