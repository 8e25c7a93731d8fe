#ifndef STH_NETWORK_HPP
#define STH_NETWORK_HPP

// TDMA save-then-transmit for N homogeneous transmitters. Each node may
// transmit in at most 1/N of the frame, so rho >= 1 - 1/N.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <string_view>
#include <type_traits>
#include <vector>

#include "sth/error.hpp"
#include "sth/outage.hpp"

namespace sth {

enum class DataMode { independent, common };

inline std::string_view to_string(DataMode m) { return m == DataMode::independent ? "independent" : "common"; }

struct NetworkParams {
    int transmitters = 1;
    DataMode mode = DataMode::independent;

    void validate() const { detail::require(transmitters >= 1, "network.transmitters must be >= 1"); }
};

/// Keeps rho* while N (1 - rho*) <= 1, otherwise the tightest TDMA-feasible ratio 1 - 1/N.
inline double tdma_save_ratio(int transmitters, double rho_star) {
    if (transmitters < 1) throw DomainError("tdma_save_ratio: N must be >= 1");
    if (!(rho_star >= 0.0 && rho_star < 1.0)) throw DomainError("tdma_save_ratio: rho* must lie in [0, 1)");
    if (static_cast<double>(transmitters) * (1.0 - rho_star) <= 1.0) return rho_star;
    return 1.0 - 1.0 / static_cast<double>(transmitters);
}

/// Largest N that can run at the single-link optimum, floor(1 / (1 - rho*)).
inline int tdma_transmitter_threshold(double rho_star) {
    int n = 1;
    while (static_cast<double>(n + 1) * (1.0 - rho_star) <= 1.0) ++n;
    return n;
}

template <typename F>
concept OutageFunction = std::invocable<const F&, double> && std::convertible_to<std::invoke_result_t<const F&, double>, double>;

/// Independent data: the system is as good as any single node.
template <OutageFunction F>
double system_outage_independent(const NetworkParams& net, double rho_star, const F& outage_at) {
    net.validate();
    return outage_at(tdma_save_ratio(net.transmitters, rho_star));
}

/// Common data with selection combining: all N copies must fail.
template <OutageFunction F>
double system_outage_common(const NetworkParams& net, double rho_star, const F& outage_at) {
    net.validate();
    const double per_node = outage_at(tdma_save_ratio(net.transmitters, rho_star));
    return std::pow(per_node, net.transmitters);
}

template <OutageFunction F>
double system_outage(const NetworkParams& net, double rho_star, const F& outage_at) {
    return net.mode == DataMode::independent ? system_outage_independent(net, rho_star, outage_at)
                                             : system_outage_common(net, rho_star, outage_at);
}

struct NetworkPoint {
    int transmitters;
    double rho_used;
    double node_outage;
    double system_outage;
};

/// System outage for N = 1..n_max. Each distinct rho is evaluated once.
template <OutageFunction F>
std::vector<NetworkPoint> network_sweep(DataMode mode, double rho_star, int n_max, const F& outage_at) {
    if (n_max < 1) throw DomainError("network sweep: N_max must be >= 1");
    std::vector<NetworkPoint> out;
    std::optional<double> optimum_outage;
    for (int n = 1; n <= n_max; ++n) {
        const double rho = tdma_save_ratio(n, rho_star);
        double node;
        if (rho == rho_star) {
            if (!optimum_outage) optimum_outage = outage_at(rho_star);
            node = *optimum_outage;
        } else {
            node = outage_at(rho);
        }
        const double sys = mode == DataMode::independent ? node : std::pow(node, n);
        out.push_back({n, rho, node, sys});
    }
    return out;
}

/// argmin over N in [1, n_max] of the common-data system outage; ties go to the smaller N.
template <OutageFunction F>
int optimal_transmitter_count_common(double rho_star, int n_max, const F& outage_at) {
    const auto sweep = network_sweep(DataMode::common, rho_star, n_max, outage_at);
    int best = 1;
    double best_value = sweep.front().system_outage;
    for (const auto& p : sweep) {
        if (p.system_outage < best_value) {
            best_value = p.system_outage;
            best = p.transmitters;
        }
    }
    return best;
}

}  // namespace sth

#endif
