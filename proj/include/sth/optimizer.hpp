#ifndef STH_OPTIMIZER_HPP
#define STH_OPTIMIZER_HPP

// Save-ratio optimisation: global grid scan followed by golden-section
// refinement, plus the closed-form thresholds that predict whether the
// optimum sits at rho = 0.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <vector>

#include "sth/error.hpp"
#include "sth/models.hpp"
#include "sth/outage.hpp"
#include "sth/parallel.hpp"

namespace sth {

struct SearchConfig {
    std::size_t grid_points = 2000;
    double refine_tol = 1e-6;
    double upper_margin = 1e-6;  ///< grid ends at 1 - upper_margin
    double bound_offset = 1e-9;  ///< keeps the grid strictly above an active feasibility bound
    double tie_tol = 1e-12;      ///< outages closer than this are ties; the smaller rho wins
    unsigned workers = 1;        ///< 0 selects hardware concurrency

    void validate() const {
        detail::require(grid_points >= 1000, "search.grid_points must be >= 1000");
        detail::require(refine_tol > 0.0 && refine_tol < 1e-2, "search.refine_tol must lie in (0, 0.01)");
    }
};

struct SearchSample {
    double rho;
    double outage;
};

struct Optimum {
    double rho_star = 0.0;
    double outage_star = 1.0;
    OutageBreakdown breakdown;
    bool lower_bound_active = false;
    double lower_bound = 0.0;
    double grid_rho_star = 0.0;  ///< best grid point before refinement
    double grid_step = 0.0;
    std::vector<SearchSample> trace;  ///< every probed point, grid first
};

struct GoldenResult {
    double x;
    double fx;
    int iterations;
};

/// Golden-section minimisation of f on [lo, hi] until the bracket is narrower than tol.
template <typename F>
    requires std::invocable<F&, double>
GoldenResult golden_section_minimize(F&& f, double lo, double hi, double tol, int max_iterations = 500) {
    constexpr double inv_phi = 0.6180339887498948482;  // (sqrt(5) - 1) / 2
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    int it = 0;
    for (; it < max_iterations && (b - a) > tol; ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? GoldenResult{c, fc, it} : GoldenResult{d, fd, it};
}

/// Efficiency above which rho*(eta, 0) = 0: (2^r - 1) / (2^r ln2 r) with r = Q/T.
inline double phase_transition_threshold(double bits, double frame) {
    if (!(bits > 0.0 && frame > 0.0)) throw DomainError("phase_transition_threshold: Q and T must be > 0");
    const double x = std::numbers::ln2 * bits / frame;
    return -std::expm1(-x) / x;
}

/// Sufficient condition for rho* > 0. A false result is inconclusive, not a proof that rho* = 0.
inline bool positivity_condition(const SystemParams& params, double peak) {
    if (!(peak > 0.0)) throw DomainError("positivity_condition: P_H must be > 0");
    return params.eta - params.circuit_power / peak < phase_transition_threshold(params.bits, params.frame);
}

/// The battery is too inefficient to power the circuit at rho = 0 when P_c >= eta P_H.
inline bool feasibility_bound_active(const SystemParams& params, double peak) {
    return params.circuit_power >= params.eta * peak;
}

/// Save-ratio at or below which outage is identically 1. The boundary
/// P_c = eta P_H yields 0: any rho > 0 is feasible there.
inline double feasible_rho_lower_bound(const SystemParams& params, double peak) {
    if (!(peak > 0.0)) throw DomainError("feasible_rho_lower_bound: P_H must be > 0");
    if (!feasibility_bound_active(params, peak)) return 0.0;
    const double ratio = params.circuit_power / peak;
    return std::max(0.0, (ratio - params.eta) / (1.0 - params.eta + ratio));
}

/// Minimises outage_at over [start, 1 - margin].
template <typename F>
    requires std::invocable<const F&, double>
Optimum minimize_outage(const F& outage_at, double start, const SearchConfig& search) {
    search.validate();
    const double stop = 1.0 - search.upper_margin;
    if (!(start < stop)) throw DomainError("minimize_outage: empty search interval");

    const std::size_t n = search.grid_points;
    const double step = (stop - start) / static_cast<double>(n - 1);
    std::vector<SearchSample> grid(n);
    parallel_for(n, search.workers, [&](std::size_t i) {
        const double rho = (i + 1 == n) ? stop : start + step * static_cast<double>(i);
        grid[i] = {rho, outage_at(rho)};
    });

    double best = grid.front().outage;
    for (const auto& s : grid) best = std::min(best, s.outage);
    std::size_t arg = 0;
    while (grid[arg].outage > best + search.tie_tol) ++arg;

    Optimum opt;
    opt.grid_step = step;
    opt.grid_rho_star = grid[arg].rho;
    opt.rho_star = grid[arg].rho;
    opt.outage_star = grid[arg].outage;
    opt.trace = grid;

    if (best >= 1.0) {
        opt.rho_star = start;
        opt.outage_star = 1.0;
        return opt;
    }

    const double lo = grid[arg == 0 ? 0 : arg - 1].rho;
    const double hi = grid[std::min(arg + 1, n - 1)].rho;
    auto traced = [&](double rho) {
        const double v = outage_at(rho);
        opt.trace.push_back({rho, v});
        return v;
    };
    const auto refined = golden_section_minimize(traced, lo, hi, search.refine_tol);
    if (refined.fx < opt.outage_star - search.tie_tol) {
        opt.rho_star = refined.x;
        opt.outage_star = refined.fx;
    }
    return opt;
}

inline Optimum optimize_save_ratio(const SystemParams& params, const HarvestModel& harvest,
                                   const ChannelModel& channel, const SearchConfig& search = {},
                                   const OutageOptions& options = {}) {
    params.validate();
    const double peak = harvest.peak();
    const bool active = feasibility_bound_active(params, peak);
    const double bound = feasible_rho_lower_bound(params, peak);
    const double start = active ? bound + search.bound_offset : 0.0;

    auto outage_at = [&](double rho) { return total_outage(params, rho, harvest, channel, options).total; };
    Optimum opt = minimize_outage(outage_at, start, search);
    opt.lower_bound_active = active;
    opt.lower_bound = bound;
    opt.breakdown = opt.outage_star >= 1.0 ? OutageBreakdown{1.0, 0.0, 1.0, 0.0}
                                           : total_outage(params, opt.rho_star, harvest, channel, options);
    return opt;
}

inline Optimum optimize_save_ratio(const Link& link, const SearchConfig& search = {}) {
    return optimize_save_ratio(link.system, link.harvest, link.channel, search, link.options);
}

}  // namespace sth

#endif
