#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sth/error.hpp"
#include "sth/quadrature.hpp"

namespace q = sth::quadrature;

TEST(Quadrature, PolynomialIsExactOnOnePanel) {
    // Agreement to rounding; the embedded Gauss rule is only exact to degree 13.
    q::Options opt;
    opt.rel_tol = 1e-13;
    const auto r = q::integrate([](double x) { return std::pow(x, 20) - 3.0 * x * x; }, -1.0, 2.0, opt);
    const double exact = (std::pow(2.0, 21) + 1.0) / 21.0 - (8.0 + 1.0);
    EXPECT_NEAR(r.value, exact, 1e-12 * std::abs(exact));
    EXPECT_TRUE(r.converged);
}

TEST(Quadrature, SmoothFunctionsMatchBoost) {
    auto f = [](double x) { return std::exp(-x) * std::cos(5.0 * x); };
    const auto r = q::integrate(f, 0.0, 10.0);
    EXPECT_NEAR(r.value, oracle::integrate(f, 0.0, 10.0), 1e-10);
    EXPECT_LE(r.abs_error, 1e-9);
}

TEST(Quadrature, IntegrableEndpointSingularity) {
    const auto r = q::integrate([](double x) { return std::log(x); }, 0.0, 1.0);
    EXPECT_NEAR(r.value, -1.0, 1e-9);
    EXPECT_TRUE(r.converged);
}

TEST(Quadrature, BreakpointsHandleJumps) {
    auto step = [](double x) { return x < 0.3 ? 1.0 : 2.0; };
    const std::vector<double> br{0.0, 0.3, 1.0};
    const auto r = q::integrate(step, std::span<const double>(br));
    EXPECT_NEAR(r.value, 0.3 + 1.4, 1e-12);
}

TEST(Quadrature, ErrorEstimateBoundsActualError) {
    auto f = [](double x) { return 1.0 / (1e-3 + (x - 0.5) * (x - 0.5)); };
    const double exact = 2.0 / std::sqrt(1e-3) * std::atan(0.5 / std::sqrt(1e-3));
    const auto r = q::integrate(f, 0.0, 1.0);
    EXPECT_LE(std::abs(r.value - exact), std::max(r.abs_error, 1e-9));
}

TEST(Quadrature, PanelCapReportsNonConvergence) {
    q::Options opt;
    opt.max_panels = 4;
    opt.abs_tol = 1e-15;
    const auto r = q::integrate([](double x) { return std::sin(1.0 / (x + 1e-3)); }, 0.0, 1.0, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_LE(r.panels, 4u);
    EXPECT_THROW(q::require_converged(r, "test"), sth::NumericalError);
    try {
        q::require_converged(r, "test");
    } catch (const sth::NumericalError& e) {
        EXPECT_EQ(e.partial_value(), r.value);
        EXPECT_EQ(e.error_bound(), r.abs_error);
    }
}

TEST(Quadrature, EmptyIntervalIsZero) {
    const auto r = q::integrate([](double) { return 1.0; }, 1.0, 1.0);
    EXPECT_EQ(r.value, 0.0);
}
