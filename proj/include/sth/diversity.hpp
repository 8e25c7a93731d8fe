#ifndef STH_DIVERSITY_HPP
#define STH_DIVERSITY_HPP

// Outage of an ideal link (eta = 1, P_c = 0, rho = 0) whose transmit power is
// itself random, over Rayleigh fading: Pr{P Gamma < C}.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "sth/error.hpp"
#include "sth/models.hpp"
#include "sth/quadrature.hpp"
#include "sth/specfun.hpp"

namespace sth {

/// SNR threshold C = 2^{Q/T} - 1.
inline double snr_threshold_for_rate(double rate) {
    if (!(rate > 0.0)) throw DomainError("rate must be > 0");
    return std::expm1(std::numbers::ln2 * rate);
}

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

struct DiversityParams {
    double threshold = 3.0;  ///< C
    PowerModel power{1.0, 50.0};
    double lambda_gamma = 1.0;

    /// lambda_p lambda_gamma: the average SNR for exponential power.
    double gamma_bar() const { return power.scale() * lambda_gamma; }
    /// beta lambda_p lambda_gamma: mean received SNR for general Gamma power.
    double mean_snr() const { return power.mean() * lambda_gamma; }
    /// D = C / (lambda_p lambda_gamma).
    double normalized_threshold() const { return threshold / gamma_bar(); }

    void validate() const {
        detail::require(std::isfinite(threshold) && threshold > 0.0, "diversity.threshold must be > 0");
        detail::require(std::isfinite(lambda_gamma) && lambda_gamma > 0.0, "diversity.lambda_gamma must be > 0");
    }
};

struct SeriesResult {
    double value = 0.0;
    int terms = 0;
    bool used_quadrature = false;  ///< D too large for the series; value came from quadrature
};

/// Series routes to quadrature above this normalised threshold D.
inline constexpr double series_max_normalized_threshold = 10.0;

inline double outage_gamma_power(const PowerModel& power, double lambda_gamma, double threshold,
                                 double abs_tol = 1e-10, double relative_floor = 1e-9);

/// Exponential-power outage as the psi-weighted power series in D = C / gamma_bar.
inline SeriesResult outage_exp_power_series(double threshold, double gamma_bar, double tol = 1e-14) {
    if (!(threshold > 0.0 && gamma_bar > 0.0)) throw DomainError("series: C and gamma_bar must be > 0");
    if (!(tol >= 1e-14)) throw DomainError("series: relative tolerance must be >= 1e-14");
    const double d = threshold / gamma_bar;
    SeriesResult out;
    if (d > series_max_normalized_threshold) {
        out.value = outage_gamma_power(PowerModel::exponential(gamma_bar), 1.0, threshold);
        out.used_quadrature = true;
        return out;
    }

    const double log_d = std::log(d);
    double coef = d;  // D^{k+1} / (k!)^2
    double sum = 0.0;
    for (int k = 0; k <= 300; ++k) {
        const double kp1 = k + 1.0;
        const double psi = specfun::digamma(kp1);
        const double scaled = coef / kp1;
        sum += scaled * (1.0 / kp1 - log_d + 2.0 * psi);
        out.terms = k + 1;
        const double magnitude = scaled * (1.0 / kp1 + std::abs(log_d) + 2.0 * std::abs(psi));
        if (k > 0 && magnitude < tol * std::abs(sum)) break;
        coef *= d / (kp1 * kp1);
    }
    out.value = std::clamp(sum, 0.0, 1.0);
    return out;
}

/// First series term: the high-SNR approximation.
inline double outage_exp_power_approx(double threshold, double gamma_bar) {
    if (!(threshold > 0.0 && gamma_bar > 0.0)) throw DomainError("approx: C and gamma_bar must be > 0");
    const double d = threshold / gamma_bar;
    return d * (1.0 - std::log(d) + 2.0 * specfun::digamma(1.0));
}

/// Constant transmit power with the same average SNR: 1 - exp(-C / gamma_bar).
inline double outage_constant_power(double threshold, double gamma_bar) {
    if (!(threshold >= 0.0 && gamma_bar > 0.0)) throw DomainError("constant power: invalid arguments");
    return -std::expm1(-threshold / gamma_bar);
}

/// Pr{P Gamma < C} for P ~ Gamma(beta, lambda_p), Gamma ~ Exp(lambda_gamma), by quadrature over p.
/// The absolute tolerance is tightened to relative_floor * value when that is stricter.
inline double outage_gamma_power(const PowerModel& power, double lambda_gamma, double threshold, double abs_tol,
                                 double relative_floor) {
    if (!(lambda_gamma > 0.0 && threshold > 0.0)) throw DomainError("gamma power: lambda_gamma and C must be > 0");
    const double beta = power.shape();
    const double scale = power.scale();
    const double k = threshold / lambda_gamma;
    auto outage_given_power = [k](double p) { return p > 0.0 ? -std::expm1(-k / p) : 1.0; };

    const double mean = power.mean();
    const double sd = std::sqrt(power.variance());
    const double core_lo = std::max(0.0, mean - 12.0 * sd);
    const double core_hi = mean + 12.0 * sd;

    quadrature::Options opt;
    opt.abs_tol = abs_tol / 3.0;
    quadrature::Result total;

    if (beta < 1.0) {
        // p = w^{1/beta} absorbs the p^{beta-1} singularity at the origin.
        const double log_norm = std::lgamma(beta) + beta * std::log(scale) + std::log(beta);
        auto integrand = [&](double w) {
            const double p = std::pow(w, 1.0 / beta);
            return std::exp(-p / scale - log_norm) * outage_given_power(p);
        };
        total += quadrature::integrate(integrand, 0.0, std::pow(core_hi, beta), opt);
    } else {
        auto integrand = [&](double p) { return power.pdf(p) * outage_given_power(p); };
        if (core_lo > 0.0) total += quadrature::integrate(integrand, 0.0, core_lo, opt);
        std::vector<double> breaks{core_lo};
        for (double s : {-4.0, 0.0, 4.0}) {
            const double b = mean + s * sd;
            if (b > breaks.back() && b < core_hi) breaks.push_back(b);
        }
        breaks.push_back(core_hi);
        total += quadrature::integrate(integrand, std::span<const double>(breaks), opt);
    }

    // Tail [core_hi, inf) via p = core_hi + t/(1-t).
    auto tail = [&](double t) {
        if (t >= 1.0) return 0.0;
        const double u = 1.0 - t;
        const double p = core_hi + t / u;
        return power.pdf(p) * outage_given_power(p) / (u * u);
    };
    total += quadrature::integrate(tail, 0.0, 1.0, opt);

    quadrature::require_converged(total, "outage_gamma_power");
    // Small outages get a second pass at a relative tolerance; the first pass
    // already met the caller's absolute tolerance, so it stands if this fails.
    if (relative_floor > 0.0 && total.value > 0.0 && abs_tol > relative_floor * total.value) {
        try {
            return outage_gamma_power(power, lambda_gamma, threshold, relative_floor * total.value, 0.0);
        } catch (const NumericalError&) {
        }
    }
    return std::clamp(total.value, 0.0, 1.0);
}

/// CDF of Z = P Gamma for independent exponentials with means lambda_p, lambda_gamma.
inline double product_cdf_bessel(double z, double lambda_p, double lambda_gamma) {
    if (!(lambda_p > 0.0 && lambda_gamma > 0.0)) throw DomainError("product cdf: means must be > 0");
    if (!(z > 0.0)) return 0.0;
    if (std::isinf(z)) return 1.0;
    const double u = 2.0 * std::sqrt(z / (lambda_p * lambda_gamma));
    if (!(u > 0.0)) return 0.0;
    return std::clamp(1.0 - u * specfun::bessel_k1(u), 0.0, 1.0);
}

struct CurvePoint {
    double gamma_bar;
    double outage;
};

struct DiversityOrder {
    double order = 0.0;                ///< negated slope of the last segment
    std::vector<double> segment_slopes;  ///< negated log-log slope per consecutive pair
};

/// Estimates the diversity order from the high-SNR end of an outage curve.
inline DiversityOrder empirical_diversity_order(std::span<const CurvePoint> curve) {
    if (curve.size() < 3) throw DomainError("diversity order: need at least 3 points");
    for (std::size_t i = 0; i < curve.size(); ++i) {
        if (!(curve[i].outage > 0.0)) throw DomainError("diversity order: outage must be > 0");
        if (!(curve[i].gamma_bar > 0.0)) throw DomainError("diversity order: gamma_bar must be > 0");
        if (i > 0 && !(curve[i].gamma_bar > curve[i - 1].gamma_bar))
            throw DomainError("diversity order: gamma_bar must be strictly increasing");
    }
    DiversityOrder out;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        const double dy = std::log10(curve[i].outage) - std::log10(curve[i - 1].outage);
        const double dx = std::log10(curve[i].gamma_bar) - std::log10(curve[i - 1].gamma_bar);
        out.segment_slopes.push_back(-dy / dx);
    }
    out.order = out.segment_slopes.back();
    return out;
}

}  // namespace sth

#endif
