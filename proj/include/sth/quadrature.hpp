#ifndef STH_QUADRATURE_HPP
#define STH_QUADRATURE_HPP

// Globally adaptive 15-point Gauss-Kronrod quadrature on finite intervals.
// The panel with the largest error estimate is bisected until the summed
// error meets the absolute (or relative) tolerance or the panel budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "sth/error.hpp"

namespace sth::quadrature {

struct Options {
    double abs_tol = 1e-9;
    double rel_tol = 0.0;
    std::size_t max_panels = 10000;
};

struct Result {
    double value = 0.0;
    double abs_error = 0.0;
    std::size_t panels = 0;
    std::size_t evaluations = 0;
    bool converged = true;

    Result& operator+=(const Result& other) {
        value += other.value;
        abs_error += other.abs_error;
        panels += other.panels;
        evaluations += other.evaluations;
        converged = converged && other.converged;
        return *this;
    }
};

namespace detail {

// Kronrod abscissae; odd indices are the embedded Gauss points.
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;

    bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel gauss_kronrod_15(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 7> left{};
    std::array<double, 7> right{};

    const double fc = f(center);
    double gauss = fc * gauss_weights[3];
    double kronrod = fc * kronrod_weights[7];
    double abs_sum = std::abs(kronrod);

    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        left[j] = f1;
        right[j] = f2;
        kronrod += kronrod_weights[j] * (f1 + f2);
        abs_sum += kronrod_weights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * (f1 + f2);
    }

    const double mean = 0.5 * kronrod;
    double asc = kronrod_weights[7] * std::abs(fc - mean);
    for (std::size_t j = 0; j < 7; ++j) {
        asc += kronrod_weights[j] * (std::abs(left[j] - mean) + std::abs(right[j] - mean));
    }

    const double scale = std::abs(half);
    const double value = kronrod * half;
    abs_sum *= scale;
    asc *= scale;
    double error = std::abs((kronrod - gauss) * half);
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    if (abs_sum > tiny / (50.0 * eps)) {
        error = std::max(50.0 * eps * abs_sum, error);
    }
    return {a, b, value, error};
}

}  // namespace detail

/// Integrates f over the panels delimited by consecutive breakpoints.
template <typename F>
    requires std::invocable<F&, double>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& options = {}) {
    Result result;
    if (breakpoints.size() < 2) return result;

    std::priority_queue<detail::Panel> queue;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        const double a = breakpoints[i];
        const double b = breakpoints[i + 1];
        if (!(b > a)) continue;
        queue.push(detail::gauss_kronrod_15(f, a, b));
        result.evaluations += 15;
    }

    auto totals = [&queue] {
        auto copy = queue;
        double value = 0.0;
        double error = 0.0;
        while (!copy.empty()) {
            value += copy.top().value;
            error += copy.top().error;
            copy.pop();
        }
        return std::pair{value, error};
    };

    auto [value, error] = totals();
    std::vector<detail::Panel> frozen;  // panels too narrow to bisect further
    double frozen_value = 0.0;
    double frozen_error = 0.0;

    while (!queue.empty()) {
        const double target = std::max(options.abs_tol, options.rel_tol * std::abs(value));
        if (error <= target) break;
        if (queue.size() + frozen.size() >= options.max_panels) break;

        const detail::Panel worst = queue.top();
        queue.pop();

        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b) ||
            (worst.b - worst.a) < 1e3 * std::numeric_limits<double>::epsilon() *
                                      std::max(std::abs(worst.a), std::abs(worst.b))) {
            frozen.push_back(worst);
            frozen_value += worst.value;
            frozen_error += worst.error;
            if (queue.empty()) break;
            continue;
        }

        const auto lo = detail::gauss_kronrod_15(f, worst.a, mid);
        const auto hi = detail::gauss_kronrod_15(f, mid, worst.b);
        result.evaluations += 30;
        value += lo.value + hi.value - worst.value;
        error += lo.error + hi.error - worst.error;
        queue.push(lo);
        queue.push(hi);
    }

    // Re-sum from scratch so the running updates do not leak rounding drift.
    auto [final_value, final_error] = totals();
    result.value = final_value + frozen_value;
    result.abs_error = final_error + frozen_error;
    result.panels = queue.size() + frozen.size();
    result.converged =
        result.abs_error <= std::max(options.abs_tol, options.rel_tol * std::abs(result.value));
    return result;
}

template <typename F>
    requires std::invocable<F&, double>
Result integrate(F&& f, double a, double b, const Options& options = {}) {
    const std::array<double, 2> ends = {a, b};
    return integrate(f, std::span<const double>(ends), options);
}

/// Throws NumericalError (with the partial value) when the tolerance is missed.
inline const Result& require_converged(const Result& result, const char* what) {
    if (!result.converged) {
        throw NumericalError(std::string(what) + ": quadrature did not converge", result.value,
                             result.abs_error);
    }
    return result;
}

}  // namespace sth::quadrature

#endif
