#ifndef STH_OUTAGE_HPP
#define STH_OUTAGE_HPP

// Circuit, channel and total outage of a save-then-transmit link as a
// function of the save-ratio rho.
//
// With a = rho/(1-rho) + eta the average transmit power is P = a X, so
//   circuit outage  Pr{X < phi},            phi = P_c / a
//   channel outage  int_phi^{P_H} f_X(x) F_Gamma(g(x)) dx,
//                   g(x) = (2^{Q/((1-rho)T)} - 1) / (a x - P_c)
// and the link is in outage with certainty once P_H <= phi.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sth/error.hpp"
#include "sth/models.hpp"
#include "sth/quadrature.hpp"

namespace sth {

struct SystemParams {
    double eta = 1.0;            ///< SESD storage efficiency in [0, 1]
    double circuit_power = 0.0;  ///< P_c, J/s
    double bits = 2.0;           ///< Q, bits per frame
    double frame = 1.0;          ///< T, seconds

    /// Field paths of every violated invariant; empty when valid.
    std::vector<std::string> violations(const std::string& prefix = "system") const {
        std::vector<std::string> out;
        if (!(eta >= 0.0 && eta <= 1.0)) out.push_back(prefix + ".eta: must lie in [0, 1]");
        if (!(circuit_power >= 0.0) || !std::isfinite(circuit_power))
            out.push_back(prefix + ".circuit_power: must be finite and >= 0");
        if (!(bits > 0.0) || !std::isfinite(bits)) out.push_back(prefix + ".bits: must be finite and > 0");
        if (!(frame > 0.0) || !std::isfinite(frame)) out.push_back(prefix + ".frame: must be finite and > 0");
        return out;
    }

    void validate() const {
        const auto v = violations();
        if (!v.empty()) throw ParameterError(v.front());
    }

    /// Required spectral efficiency Q/T.
    double rate() const noexcept { return bits / frame; }
};

struct OutageBreakdown {
    double circuit = 0.0;
    double channel = 0.0;
    double total = 0.0;
    double quad_error = 0.0;
};

struct OutageOptions {
    double abs_tol = 1e-9;
    std::size_t max_panels = 10000;
    /// Width of the sliver [phi, phi + eps * P_H] integrated in closed form.
    double boundary_fraction = 1e-12;
};

namespace detail {

inline void check_save_ratio(double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("save-ratio must lie in [0, 1)");
}

// rho/(1-rho) + eta: transmit power per unit harvest rate.
inline double power_gain(const SystemParams& params, double rho) {
    return rho / (1.0 - rho) + params.eta;
}

// 2^{Q/((1-rho)T)} - 1, +inf on overflow.
inline double rate_threshold(const SystemParams& params, double rho) {
    return std::expm1(std::numbers::ln2 * params.rate() / (1.0 - rho));
}

}  // namespace detail

inline double effective_rate(const SystemParams& params, double rho) {
    detail::check_save_ratio(rho);
    return params.bits / ((1.0 - rho) * params.frame);
}

/// phi: minimum harvest rate that powers the circuit for the whole transmit phase.
inline double power_threshold(const SystemParams& params, double rho) {
    detail::check_save_ratio(rho);
    if (params.circuit_power == 0.0) return 0.0;
    const double gain = detail::power_gain(params, rho);
    if (gain == 0.0) return std::numeric_limits<double>::infinity();
    return params.circuit_power / gain;
}

/// g: minimum channel SNR that supports the effective rate at harvest rate x.
inline double snr_threshold(const SystemParams& params, double rho, double x) {
    const double phi = power_threshold(params, rho);
    if (!(x > phi)) throw DomainError("snr_threshold: harvest rate does not exceed the circuit threshold");
    const double net = x * detail::power_gain(params, rho) - params.circuit_power;
    if (!(net > 0.0)) return std::numeric_limits<double>::infinity();
    return detail::rate_threshold(params, rho) / net;
}

inline double circuit_outage(const SystemParams& params, double rho, const HarvestModel& harvest) {
    const double phi = power_threshold(params, rho);
    if (!(harvest.peak() > phi)) return 1.0;
    return harvest.prob_below(phi);
}

namespace detail {

inline quadrature::Result channel_outage_integral(const SystemParams& params, double rho,
                                                  const HarvestModel& harvest, const ChannelModel& channel,
                                                  const OutageOptions& options) {
    const double phi = power_threshold(params, rho);
    const double peak = harvest.peak();
    quadrature::Result result;
    if (!(peak > phi)) return result;

    const double gain = power_gain(params, rho);
    const double numerator = rate_threshold(params, rho);
    auto channel_term = [&](double x) {
        const double net = x * gain - params.circuit_power;
        if (!(net > 0.0)) return 1.0;
        return channel.prob_below(numerator / net);
    };

    if (!harvest.continuous()) {
        result.value = channel_term(peak);
        return result;
    }

    // Close to phi the SNR requirement diverges and F_Gamma saturates at 1.
    const double sliver = std::min(options.boundary_fraction * peak, 0.5 * (peak - phi));
    const double start = phi + sliver;
    const double head = sliver * harvest.pdf(phi + 0.5 * sliver);

    // exp(-c / (x - phi)) is flat but not analytic at phi; geometric panels
    // toward phi keep the Gauss and Kronrod estimates honest there.
    std::vector<double> breaks{start};
    for (int k = 12; k >= 1; --k) {
        const double b = phi + (peak - phi) * std::ldexp(1.0, -k);
        if (b > breaks.back()) breaks.push_back(b);
    }
    breaks.push_back(peak);
    if (channel.kind() == ChannelKind::point_mass && channel.mean_snr() > 0.0 && std::isfinite(numerator)) {
        // F_Gamma(g(x)) jumps where g(x) equals the fixed SNR.
        const double jump = (numerator / channel.mean_snr() + params.circuit_power) / gain;
        if (jump > start && jump < peak) {
            breaks.insert(std::upper_bound(breaks.begin(), breaks.end(), jump), jump);
        }
    }

    auto integrand = [&](double x) { return harvest.pdf(x) * channel_term(x); };
    quadrature::Options qopt;
    qopt.abs_tol = options.abs_tol;
    qopt.max_panels = options.max_panels;
    result = quadrature::integrate(integrand, std::span<const double>(breaks), qopt);
    result.value += head;
    return result;
}

}  // namespace detail

inline double channel_outage(const SystemParams& params, double rho, const HarvestModel& harvest,
                             const ChannelModel& channel, const OutageOptions& options = {}) {
    detail::check_save_ratio(rho);
    const auto r = detail::channel_outage_integral(params, rho, harvest, channel, options);
    quadrature::require_converged(r, "channel_outage");
    return std::clamp(r.value, 0.0, 1.0);
}

inline OutageBreakdown total_outage(const SystemParams& params, double rho, const HarvestModel& harvest,
                                    const ChannelModel& channel, const OutageOptions& options = {}) {
    detail::check_save_ratio(rho);
    OutageBreakdown out;
    const double phi = power_threshold(params, rho);
    if (!(harvest.peak() > phi)) {
        out.circuit = 1.0;
        out.total = 1.0;
        return out;
    }
    out.circuit = harvest.prob_below(phi);
    const auto r = detail::channel_outage_integral(params, rho, harvest, channel, options);
    quadrature::require_converged(r, "total_outage");
    out.channel = std::clamp(r.value, 0.0, 1.0 - out.circuit);
    out.total = out.circuit + out.channel;
    out.quad_error = r.abs_error;
    return out;
}

/// A single link: system knobs plus the harvest and channel laws. Callable as rho -> total outage.
struct Link {
    SystemParams system;
    HarvestModel harvest;
    ChannelModel channel;
    OutageOptions options{};

    OutageBreakdown breakdown(double rho) const { return total_outage(system, rho, harvest, channel, options); }
    double operator()(double rho) const { return breakdown(rho).total; }
};

}  // namespace sth

#endif
