#ifndef STH_MONTECARLO_HPP
#define STH_MONTECARLO_HPP

// Frame-level simulation of the save-then-transmit protocol. Each frame draws
// a fresh harvest rate and channel SNR and is classified directly from the
// buffered-energy bookkeeping and the Shannon rate, independently of the
// closed-form thresholds used by the analytic path.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "sth/error.hpp"
#include "sth/models.hpp"
#include "sth/outage.hpp"
#include "sth/parallel.hpp"

namespace sth {

enum class FrameResult { success, circuit_outage, channel_outage };

inline std::string_view to_string(FrameResult r) {
    switch (r) {
        case FrameResult::success: return "success";
        case FrameResult::circuit_outage: return "circuit_outage";
        case FrameResult::channel_outage: return "channel_outage";
    }
    return "unknown";
}

struct FrameOutcome {
    double harvest_rate = 0.0;
    double buffered_energy = 0.0;  ///< E_T in the MESD when transmission starts
    double avg_power = 0.0;        ///< E_T spread over the transmit phase
    FrameResult outcome = FrameResult::success;
};

struct OutageEstimate {
    double point = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t outage_count = 0;
    std::uint64_t circuit_count = 0;
    std::uint64_t channel_count = 0;
};

/// Trials per independent random stream.
inline constexpr std::uint64_t monte_carlo_block = 1u << 16;
inline constexpr std::uint64_t monte_carlo_min_trials = 1000;

// Steady state: every frame, frame 0 included, receives the previous frame's SESD
// transfer. A cold start would give frame 0 only rho T x of MESD energy.
inline FrameOutcome simulate_frame(const SystemParams& params, double rho, double x, double gamma) {
    detail::check_save_ratio(rho);
    FrameOutcome out;
    out.harvest_rate = x;
    // MESD harvests for rho T; the SESD harvests during (1 - rho) T and hands over eta of it.
    out.buffered_energy = x * (rho + params.eta * (1.0 - rho)) * params.frame;
    const double transmit_time = (1.0 - rho) * params.frame;
    out.avg_power = out.buffered_energy / transmit_time;

    if (out.avg_power < params.circuit_power) {
        out.outcome = FrameResult::circuit_outage;
        return out;
    }
    const double mutual_information = std::log2(1.0 + (out.avg_power - params.circuit_power) * gamma);
    const double required = params.bits / transmit_time;
    out.outcome = mutual_information < required ? FrameResult::channel_outage : FrameResult::success;
    return out;
}

namespace detail {

inline void finish_estimate(OutageEstimate& est) {
    est.outage_count = est.circuit_count + est.channel_count;
    est.point = static_cast<double>(est.outage_count) / static_cast<double>(est.trials);
    est.std_error = std::sqrt(est.point * (1.0 - est.point) / static_cast<double>(est.trials));
}

// Splits trials into fixed blocks with one stream each; per-block counts are
// summed in block order so the result is independent of the worker count.
template <typename Block>
OutageEstimate run_blocks(std::uint64_t trials, std::uint64_t seed, unsigned workers, Block&& block) {
    if (trials < monte_carlo_min_trials) throw DomainError("Monte Carlo needs at least 1000 trials");
    const std::uint64_t blocks = (trials + monte_carlo_block - 1) / monte_carlo_block;
    std::vector<OutageEstimate> partial(blocks);
    parallel_for(blocks, workers, [&](std::size_t b) {
        const std::uint64_t first = b * monte_carlo_block;
        const std::uint64_t count = std::min(monte_carlo_block, trials - first);
        RandomStream stream = make_stream(seed, b);
        block(stream, count, partial[b]);
    });
    OutageEstimate est;
    est.trials = trials;
    est.seed = seed;
    for (const auto& p : partial) {
        est.circuit_count += p.circuit_count;
        est.channel_count += p.channel_count;
    }
    finish_estimate(est);
    return est;
}

}  // namespace detail

inline OutageEstimate estimate_outage(const SystemParams& params, double rho, const HarvestModel& harvest,
                                      const ChannelModel& channel, std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers = 1) {
    params.validate();
    detail::check_save_ratio(rho);
    return detail::run_blocks(trials, seed, workers, [&](RandomStream& stream, std::uint64_t count,
                                                         OutageEstimate& acc) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const double x = harvest.sample(stream);
            const double gamma = channel.sample(stream);
            switch (simulate_frame(params, rho, x, gamma).outcome) {
                case FrameResult::circuit_outage: ++acc.circuit_count; break;
                case FrameResult::channel_outage: ++acc.channel_count; break;
                case FrameResult::success: break;
            }
        }
    });
}

/// Empirical Pr{P Gamma < C} with P and Gamma drawn independently; Gamma is Rayleigh with mean lambda_gamma.
inline OutageEstimate estimate_product_outage(const PowerModel& power, double lambda_gamma, double threshold,
                                              std::uint64_t trials, std::uint64_t seed, unsigned workers = 1) {
    const ChannelModel channel = ChannelModel::rayleigh(lambda_gamma);
    return detail::run_blocks(trials, seed, workers, [&](RandomStream& stream, std::uint64_t count,
                                                         OutageEstimate& acc) {
        for (std::uint64_t i = 0; i < count; ++i) {
            const double p = power.sample(stream);
            const double gamma = channel.sample(stream);
            if (p * gamma < threshold) ++acc.channel_count;
        }
    });
}

}  // namespace sth

#endif
