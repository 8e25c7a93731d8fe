#ifndef STH_VALIDATION_HPP
#define STH_VALIDATION_HPP

// Invariant suite run by `sth validate`: cheap structural and numerical
// checks across every module, evaluated on the scenario at hand.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sth/diversity.hpp"
#include "sth/montecarlo.hpp"
#include "sth/network.hpp"
#include "sth/optimizer.hpp"
#include "sth/outage.hpp"
#include "sth/quadrature.hpp"
#include "sth/scenario.hpp"
#include "sth/specfun.hpp"

namespace sth {

struct CheckResult {
    std::string module;
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
    }
};

struct ValidationOptions {
    std::uint64_t mc_trials = 200000;  ///< capped so validation stays quick
    unsigned workers = 1;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

class Checker {
public:
    ValidationReport report;

    // A check body returns {passed, detail}; exceptions count as failures.
    void run(const std::string& module, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
        CheckResult r{module, name, false, ""};
        try {
            auto [ok, detail] = body();
            r.passed = ok;
            r.detail = std::move(detail);
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        report.checks.push_back(std::move(r));
    }
};

inline std::vector<double> probe_ratios(double start) {
    std::vector<double> out;
    for (double r : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) out.push_back(std::max(r, start));
    return out;
}

}  // namespace detail

inline ValidationReport validate_scenario(const Scenario& s, const ValidationOptions& vopt = {}) {
    detail::Checker ck;
    const Link link = s.link();
    const double peak = s.harvest.peak();
    const double start = feasibility_bound_active(s.system, peak) ? feasible_rho_lower_bound(s.system, peak) + 1e-6 : 0.0;
    const auto ratios = detail::probe_ratios(start);

    // models
    ck.run("models", "harvest cdf matches integrated pdf", [&] {
        if (!s.harvest.continuous()) return std::pair{s.harvest.cdf(peak) == 1.0, std::string("point mass")};
        double worst = 0.0;
        for (double f : {0.1, 0.37, 0.5, 0.81, 1.0}) {
            const auto r = quadrature::integrate([&](double x) { return s.harvest.pdf(x); }, 0.0, f * peak);
            worst = std::max(worst, std::abs(r.value - s.harvest.cdf(f * peak)));
        }
        return std::pair{worst < 1e-8, "max |cdf - int pdf| = " + detail::fmt(worst)};
    });
    ck.run("models", "channel cdf matches integrated pdf", [&] {
        if (s.channel.kind() == ChannelKind::point_mass) return std::pair{true, std::string("point mass")};
        const double m = s.channel.mean();
        double worst = 0.0;
        for (double f : {0.1, 1.0, 5.0}) {
            const auto r = quadrature::integrate([&](double g) { return s.channel.pdf(g); }, 0.0, f * m);
            worst = std::max(worst, std::abs(r.value - s.channel.cdf(f * m)));
        }
        return std::pair{worst < 1e-8, "max |cdf - int pdf| = " + detail::fmt(worst)};
    });

    // outage_core
    ck.run("outage_core", "circuit and channel outage are exclusive and sum to total", [&] {
        double worst = 0.0;
        for (double rho : ratios) {
            const auto b = link.breakdown(rho);
            if (b.circuit < 0 || b.channel < 0 || b.total > 1.0 + 1e-12) return std::pair{false, "out of range at rho=" + detail::fmt(rho)};
            worst = std::max(worst, std::abs(b.circuit + b.channel - b.total));
        }
        return std::pair{worst < 1e-12, "max |circuit + channel - total| = " + detail::fmt(worst)};
    });
    ck.run("outage_core", "outage non-increasing in eta", [&] {
        for (double rho : ratios) {
            double prev = 2.0;
            for (double eta : {0.2, 0.5, 0.8, 1.0}) {
                SystemParams p = s.system;
                p.eta = eta;
                const auto b = total_outage(p, rho, s.harvest, s.channel);
                if (b.total > prev + 2e-9) return std::pair{false, "increase at rho=" + detail::fmt(rho)};
                prev = b.total;
            }
        }
        return std::pair{true, std::string("eta in {0.2, 0.5, 0.8, 1}")};
    });
    ck.run("outage_core", "outage non-decreasing in circuit power", [&] {
        for (double rho : ratios) {
            double prev = -1.0;
            for (double f : {0.0, 0.1, 0.3, 0.6}) {
                SystemParams p = s.system;
                p.circuit_power = f * peak;
                const auto b = total_outage(p, rho, s.harvest, s.channel);
                if (b.total < prev - 2e-9) return std::pair{false, "decrease at rho=" + detail::fmt(rho)};
                prev = b.total;
            }
        }
        return std::pair{true, std::string("P_c / P_H in {0, 0.1, 0.3, 0.6}")};
    });

    // optimizer
    Optimum opt;
    ck.run("optimizer", "optimum is no worse than any probe point", [&] {
        opt = optimize_save_ratio(link, s.search);
        for (double rho : ratios) {
            if (opt.outage_star > link(rho) + 1e-9) return std::pair{false, "beaten at rho=" + detail::fmt(rho)};
        }
        return std::pair{true, "rho* = " + detail::fmt(opt.rho_star) + ", P_out* = " + detail::fmt(opt.outage_star)};
    });
    ck.run("optimizer", "rho* respects the feasibility bound", [&] {
        const double bound = feasible_rho_lower_bound(s.system, peak);
        return std::pair{opt.rho_star >= bound, "bound = " + detail::fmt(bound)};
    });
    ck.run("optimizer", "outage is 1 below an active feasibility bound", [&] {
        if (!feasibility_bound_active(s.system, peak)) return std::pair{true, std::string("bound inactive")};
        const double bound = feasible_rho_lower_bound(s.system, peak);
        const double v = link(std::max(0.0, bound * (1.0 - 1e-6)));
        return std::pair{v == 1.0, "P_out just below bound = " + detail::fmt(v)};
    });
    ck.run("optimizer", "positivity condition implies rho* > 0", [&] {
        const bool cond = positivity_condition(s.system, peak);
        if (!cond) return std::pair{true, std::string("condition does not hold; inconclusive")};
        return std::pair{opt.rho_star > 0.0, "rho* = " + detail::fmt(opt.rho_star)};
    });

    // specfun
    ck.run("specfun", "digamma recurrence", [&] {
        double worst = 0.0;
        for (double x : {0.3, 1.0, 2.5, 7.0, 40.0}) {
            const double lhs = specfun::digamma(x + 1.0);
            const double rhs = specfun::digamma(x) + 1.0 / x;
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
        return std::pair{worst < 1e-13, "max rel residual = " + detail::fmt(worst)};
    });
    ck.run("specfun", "K0 and K1 branches agree at the switch point", [&] {
        const double x = specfun::bessel_k_series_limit;
        double worst = 0.0;
        for (int order : {0, 1}) {
            const double series = order == 0 ? specfun::bessel_k0(x) : specfun::bessel_k1(x);
            const double integral = specfun::detail::scaled_bessel_k_integral(order, x).value * std::exp(-x);
            worst = std::max(worst, std::abs(series - integral) / integral);
        }
        return std::pair{worst < 1e-12, "max rel gap = " + detail::fmt(worst)};
    });

    // diversity
    const DiversityParams dp = s.diversity ? s.diversity->params : DiversityParams{};
    ck.run("diversity", "series, quadrature and Bessel CDF agree", [&] {
        const double gb = dp.gamma_bar();
        const double series = outage_exp_power_series(dp.threshold, gb).value;
        const double quad = outage_gamma_power(PowerModel::exponential(dp.power.scale()), dp.lambda_gamma, dp.threshold);
        const double bessel = product_cdf_bessel(dp.threshold, dp.power.scale(), dp.lambda_gamma);
        const double gap = std::max(std::abs(series - quad), std::abs(series - bessel)) / series;
        return std::pair{gap < 1e-6, "max rel gap = " + detail::fmt(gap)};
    });
    ck.run("diversity", "random power is worse than constant power", [&] {
        const double gb = dp.mean_snr();
        const double random = outage_gamma_power(dp.power, dp.lambda_gamma, dp.threshold);
        const double constant = outage_constant_power(dp.threshold, gb);
        return std::pair{random > constant, detail::fmt(random) + " > " + detail::fmt(constant)};
    });

    // montecarlo
    ck.run("montecarlo", "simulation agrees with analytic outage at rho*", [&] {
        const std::uint64_t trials = std::min<std::uint64_t>(s.mc.trials, vopt.mc_trials);
        const double rho = opt.rho_star;
        const auto est = estimate_outage(s.system, rho, s.harvest, s.channel, trials, s.mc.seed, vopt.workers);
        const double analytic = link(rho);
        const double sigma = std::max(est.std_error, 1.0 / static_cast<double>(trials));
        const double z = std::abs(est.point - analytic) / sigma;
        return std::pair{z <= 4.0, "z = " + detail::fmt(z) + " over " + std::to_string(trials) + " frames"};
    });
    ck.run("montecarlo", "reruns with the same seed are identical", [&] {
        const auto a = estimate_outage(s.system, opt.rho_star, s.harvest, s.channel, 20000, s.mc.seed, 1);
        const auto b = estimate_outage(s.system, opt.rho_star, s.harvest, s.channel, 20000, s.mc.seed, 3);
        return std::pair{a.circuit_count == b.circuit_count && a.channel_count == b.channel_count,
                         std::string("1 vs 3 workers")};
    });

    // network
    ck.run("network", "TDMA save-ratio keeps every node within its slot", [&] {
        for (int n = 1; n <= 20; ++n) {
            const double rho = tdma_save_ratio(n, opt.rho_star);
            if (n * (1.0 - rho) > 1.0 + 1e-12 || rho < opt.rho_star) return std::pair{false, "violated at N=" + std::to_string(n)};
        }
        return std::pair{true, "threshold N = " + std::to_string(tdma_transmitter_threshold(opt.rho_star))};
    });
    ck.run("network", "common data never worse than independent data", [&] {
        const int n_max = s.network ? std::max(s.network->transmitters, 2) : 8;
        const auto indep = network_sweep(DataMode::independent, opt.rho_star, n_max, link);
        const auto common = network_sweep(DataMode::common, opt.rho_star, n_max, link);
        for (std::size_t i = 0; i < indep.size(); ++i) {
            if (common[i].system_outage > indep[i].system_outage + 1e-15) return std::pair{false, "violated at N=" + std::to_string(i + 1)};
        }
        return std::pair{true, "N = 1.." + std::to_string(n_max)};
    });

    return ck.report;
}

}  // namespace sth

#endif
