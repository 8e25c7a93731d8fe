#ifndef STH_COMMANDS_HPP
#define STH_COMMANDS_HPP

// Command implementations behind the `sth` executable. Argument parsing
// lives in the tool; everything here works on an already-parsed Invocation
// so it can be driven from tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sth/diversity.hpp"
#include "sth/error.hpp"
#include "sth/montecarlo.hpp"
#include "sth/network.hpp"
#include "sth/optimizer.hpp"
#include "sth/outage.hpp"
#include "sth/parallel.hpp"
#include "sth/scenario.hpp"
#include "sth/sweep_result.hpp"
#include "sth/validation.hpp"

#ifndef STH_VERSION
#define STH_VERSION "unknown"
#endif

namespace sth {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Invocation {
    std::string command;
    std::string scenario_path;
    std::optional<std::string> out;
    std::optional<OutputFormat> format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::vector<std::string> axes;  ///< NAME=start:stop:steps
    std::optional<double> rho;
    std::optional<int> n_max;
    std::optional<std::string> mode;  ///< independent, common or both
    unsigned jobs = 0;                ///< 0 selects hardware concurrency
    bool timestamp = false;
};

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"outage",  "optimize", "sweep",   "diversity",
                                                "network", "simulate", "validate"};
    return names;
}

/// Parses NAME=start:stop:steps.
inline AxisSpec parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("axis '" + text + "': expected NAME=start:stop:steps");
    AxisSpec axis;
    axis.name = text.substr(0, eq);
    if (axis.name == "pc") axis.name = "circuit_power";
    const std::string rest = text.substr(eq + 1);
    const auto c1 = rest.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : rest.find(':', c1 + 1);
    if (c2 == std::string::npos || rest.find(':', c2 + 1) != std::string::npos)
        throw UsageError("axis '" + text + "': expected NAME=start:stop:steps");
    try {
        std::size_t used = 0;
        const std::string a = rest.substr(0, c1), b = rest.substr(c1 + 1, c2 - c1 - 1), n = rest.substr(c2 + 1);
        axis.start = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        axis.stop = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        const long steps = std::stol(n, &used);
        if (used != n.size() || steps < 1) throw std::invalid_argument(n);
        axis.steps = static_cast<int>(steps);
    } catch (const std::logic_error&) {
        throw UsageError("axis '" + text + "': start and stop must be numbers and steps a positive integer");
    }
    return axis;
}

namespace detail {

// Axis names accepted by `sweep`, mapped to their input columns.
inline bool known_sweep_axis(const std::string& name) {
    return name == "eta" || name == "circuit_power" || name == "rho" || name == "snr";
}

inline std::map<std::string, std::string> base_metadata(const Invocation& inv, const Scenario& s) {
    std::map<std::string, std::string> meta{{"tool_version", STH_VERSION},
                                            {"command", inv.command},
                                            {"scenario", s.name.empty() ? inv.scenario_path : s.name}};
    if (inv.timestamp) {
        const auto now = std::chrono::system_clock::now();
        meta["timestamp"] = std::to_string(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    }
    return meta;
}

inline std::uint64_t row_seed(std::uint64_t seed, std::uint64_t row) {
    RandomStream s = make_stream(seed, (std::uint64_t{1} << 40) | row);
    return s();
}

// Builds a result whose input columns are sorted by name.
class TableBuilder {
public:
    TableBuilder(std::vector<std::string> inputs, std::vector<std::string> outputs) {
        order_.resize(inputs.size());
        for (std::size_t i = 0; i < inputs.size(); ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) { return inputs[a] < inputs[b]; });
        for (std::size_t i : order_) result.input_columns.push_back(inputs[i]);
        result.output_columns = std::move(outputs);
    }

    // Inputs arrive in declaration order and are permuted into column order.
    SweepRow row(const std::vector<double>& inputs, std::vector<double> outputs, std::string provenance) const {
        SweepRow r;
        for (std::size_t i : order_) r.inputs.push_back(inputs.at(i));
        r.outputs = std::move(outputs);
        r.provenance = std::move(provenance);
        return r;
    }

    SweepResult result;

private:
    std::vector<std::size_t> order_;
};

inline std::vector<std::string> system_columns() { return {"bits", "circuit_power", "eta", "frame"}; }
inline std::vector<double> system_values(const SystemParams& p) { return {p.bits, p.circuit_power, p.eta, p.frame}; }

inline void forbid(bool present, const std::string& flag, const std::string& command) {
    if (present) throw UsageError(flag + " cannot be combined with '" + command + "'");
}

inline DataMode parse_mode(const std::string& m) {
    if (m == "independent") return DataMode::independent;
    if (m == "common") return DataMode::common;
    throw UsageError("--mode must be independent, common or both");
}

// ---------------------------------------------------------------------------

inline SweepResult cmd_outage(const Invocation& inv, const Scenario& s) {
    if (!inv.rho) throw UsageError("'outage' needs --rho");
    auto cols = system_columns();
    cols.push_back("rho");
    TableBuilder tb(cols, {"circuit_outage", "channel_outage", "total_outage", "quad_error"});
    const auto b = s.link().breakdown(*inv.rho);
    auto in = system_values(s.system);
    in.push_back(*inv.rho);
    tb.result.rows.push_back(tb.row(in, {b.circuit, b.channel, b.total, b.quad_error}, "analytic"));
    return tb.result;
}

inline SweepResult cmd_optimize(const Invocation& inv, const Scenario& s) {
    SearchConfig search = s.search;
    search.workers = inv.jobs;
    const auto opt = optimize_save_ratio(s.link(), search);
    const double peak = s.harvest.peak();
    TableBuilder tb(system_columns(),
                    {"rho_star", "outage_star", "circuit_outage", "channel_outage", "quad_error", "threshold_N",
                     "grid_rho_star", "lower_bound", "lower_bound_active", "phase_transition_threshold",
                     "positivity_condition"});
    tb.result.rows.push_back(tb.row(system_values(s.system),
                                    {opt.rho_star, opt.outage_star, opt.breakdown.circuit, opt.breakdown.channel,
                                     opt.breakdown.quad_error, 1.0 / (1.0 - opt.rho_star), opt.grid_rho_star,
                                     opt.lower_bound, opt.lower_bound_active ? 1.0 : 0.0,
                                     phase_transition_threshold(s.system.bits, s.system.frame),
                                     positivity_condition(s.system, peak) ? 1.0 : 0.0},
                                    "analytic"));
    return tb.result;
}

inline SweepResult cmd_sweep(const Invocation& inv, const Scenario& s) {
    std::vector<AxisSpec> axes;
    for (const auto& a : inv.axes) axes.push_back(parse_axis(a));
    if (axes.empty()) axes = s.sweep_axes;
    if (axes.empty()) throw UsageError("'sweep' needs --axis or a sweep section in the scenario");
    std::set<std::string> seen;
    for (const auto& a : axes) {
        if (!known_sweep_axis(a.name)) throw UsageError("unknown sweep axis '" + a.name + "' (eta, pc, rho, snr)");
        if (!seen.insert(a.name).second) throw UsageError("axis '" + a.name + "' given twice");
    }
    const bool rho_axis = seen.contains("rho");
    if (rho_axis && inv.rho) throw UsageError("--rho conflicts with a rho axis");
    const bool fixed_rho = rho_axis || inv.rho.has_value();
    const bool snr_axis = seen.contains("snr");
    const bool with_mc = inv.trials.has_value();
    const std::uint64_t seed = inv.seed.value_or(s.mc.seed);

    // Inputs: each axis, plus the linear SNR next to the dB one, plus a fixed rho.
    std::vector<std::string> inputs;
    for (const auto& a : axes) inputs.push_back(a.name == "snr" ? "snr_db" : a.name);
    if (snr_axis) inputs.push_back("gamma_bar");
    if (inv.rho) inputs.push_back("rho");

    std::vector<std::string> outputs;
    if (fixed_rho)
        outputs = {"circuit_outage", "channel_outage", "total_outage", "quad_error"};
    else
        outputs = {"rho_star", "outage_star", "circuit_outage", "channel_outage", "quad_error", "lower_bound"};
    if (with_mc) outputs.insert(outputs.end(), {"mc_outage", "mc_stderr"});

    TableBuilder tb(inputs, outputs);
    for (const auto& a : axes) tb.result.axes.push_back({a.name, a.values()});

    const std::size_t rows = tb.result.expected_rows();
    std::vector<SweepRow> out(rows);
    parallel_for(rows, inv.jobs, [&](std::size_t index) {
        SystemParams sys = s.system;
        ChannelModel channel = s.channel;
        double rho = inv.rho.value_or(0.0);
        std::vector<double> in;
        std::size_t rem = index;
        std::vector<double> coords(axes.size());
        for (std::size_t k = axes.size(); k-- > 0;) {
            const auto& values = tb.result.axes[k].values;
            coords[k] = values[rem % values.size()];
            rem /= values.size();
        }
        double gamma_bar = 0.0;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            const double v = coords[k];
            in.push_back(v);
            if (axes[k].name == "eta") sys.eta = v;
            else if (axes[k].name == "circuit_power") sys.circuit_power = v;
            else if (axes[k].name == "rho") rho = v;
            else {
                gamma_bar = from_db(v);
                channel = ChannelModel::rayleigh(gamma_bar / s.harvest.mean());
            }
        }
        if (snr_axis) in.push_back(gamma_bar);
        if (inv.rho) in.push_back(*inv.rho);
        sys.validate();

        std::vector<double> vals;
        if (fixed_rho) {
            const auto b = total_outage(sys, rho, s.harvest, channel);
            vals = {b.circuit, b.channel, b.total, b.quad_error};
        } else {
            const auto opt = optimize_save_ratio(sys, s.harvest, channel, s.search);
            rho = opt.rho_star;
            vals = {opt.rho_star, opt.outage_star, opt.breakdown.circuit, opt.breakdown.channel,
                    opt.breakdown.quad_error, opt.lower_bound};
        }
        if (with_mc) {
            const auto est = estimate_outage(sys, rho, s.harvest, channel, *inv.trials, row_seed(seed, index), 1);
            vals.push_back(est.point);
            vals.push_back(est.std_error);
        }
        out[index] = tb.row(in, std::move(vals), with_mc ? "analytic+monte-carlo" : "analytic");
    });
    tb.result.rows = std::move(out);
    if (with_mc) {
        tb.result.metadata["seed"] = std::to_string(seed);
        tb.result.metadata["trials"] = std::to_string(*inv.trials);
    }
    return tb.result;
}

inline SweepResult cmd_diversity(const Invocation& inv, const Scenario& s) {
    const DiversityConfig cfg = s.diversity.value_or(DiversityConfig{});
    AxisSpec axis = cfg.snr_db;
    if (inv.axes.size() > 1) throw UsageError("'diversity' takes a single snr axis");
    if (inv.axes.size() == 1) {
        axis = parse_axis(inv.axes.front());
        if (axis.name != "snr") throw UsageError("'diversity' only sweeps the snr axis");
    }
    const double c = cfg.params.threshold;
    const double power_mean = cfg.params.power.mean();

    std::vector<std::string> outputs{"constant_power", "exp_power_series", "exp_power_approx"};
    for (double b : cfg.betas) outputs.push_back("gamma_power_beta_" + format_number(b));
    outputs.insert(outputs.end(), {"link_outage_rho0", "link_outage_rho_opt", "link_rho_star"});
    TableBuilder tb({"snr_db", "gamma_bar"}, outputs);
    tb.result.axes.push_back({"snr", axis.values()});

    const auto& grid = tb.result.axes.front().values;
    std::vector<SweepRow> out(grid.size());
    parallel_for(grid.size(), inv.jobs, [&](std::size_t i) {
        const double gb = from_db(grid[i]);
        const double lambda_gamma = gb / power_mean;
        std::vector<double> v{outage_constant_power(c, gb), outage_exp_power_series(c, gb).value,
                              outage_exp_power_approx(c, gb)};
        for (double beta : cfg.betas)
            v.push_back(outage_gamma_power(PowerModel::with_mean(beta, power_mean), lambda_gamma, c));
        const ChannelModel channel = ChannelModel::rayleigh(gb / s.harvest.mean());
        v.push_back(total_outage(s.system, 0.0, s.harvest, channel).total);
        const auto opt = optimize_save_ratio(s.system, s.harvest, channel, s.search);
        v.push_back(opt.outage_star);
        v.push_back(opt.rho_star);
        out[i] = tb.row({grid[i], gb}, std::move(v), "analytic");
    });
    tb.result.rows = std::move(out);

    if (grid.size() >= 3) {
        std::vector<CurvePoint> curve;
        for (std::size_t i = 0; i < grid.size(); ++i)
            curve.push_back({tb.result.rows[i].inputs[tb.result.input_index("gamma_bar")],
                             tb.result.output(i, "exp_power_series")});
        std::sort(curve.begin(), curve.end(), [](auto& a, auto& b) { return a.gamma_bar < b.gamma_bar; });
        try {
            tb.result.metadata["exp_power_diversity_order"] = format_number(empirical_diversity_order(curve).order);
        } catch (const DomainError&) {
        }
    }
    tb.result.metadata["threshold"] = format_number(c);
    return tb.result;
}

inline SweepResult cmd_network(const Invocation& inv, const Scenario& s) {
    const int n_max = inv.n_max.value_or(s.network ? std::max(s.network->transmitters, 1) : 15);
    if (n_max < 1) throw UsageError("--n-max must be >= 1");
    std::string mode = inv.mode.value_or(s.network ? std::string(to_string(s.network->mode)) : "both");
    if (mode != "both") parse_mode(mode);

    SearchConfig search = s.search;
    search.workers = inv.jobs;
    const Link link = s.link();
    const auto opt = optimize_save_ratio(link, search);
    auto outage_at = [&](double rho) { return rho == opt.rho_star ? opt.outage_star : link(rho); };

    std::vector<std::string> outputs{"rho_used", "node_outage"};
    if (mode == "both")
        outputs.insert(outputs.end(), {"system_outage_common", "system_outage_independent"});
    else
        outputs.push_back("system_outage");
    TableBuilder tb({"transmitters"}, outputs);
    SweepAxis axis{"transmitters", {}};
    for (int n = 1; n <= n_max; ++n) axis.values.push_back(n);
    tb.result.axes.push_back(axis);

    const auto common = network_sweep(DataMode::common, opt.rho_star, n_max, outage_at);
    for (const auto& p : common) {
        std::vector<double> v{p.rho_used, p.node_outage};
        if (mode == "both") {
            v.push_back(p.system_outage);
            v.push_back(p.node_outage);
        } else {
            v.push_back(mode == "common" ? p.system_outage : p.node_outage);
        }
        tb.result.rows.push_back(tb.row({static_cast<double>(p.transmitters)}, std::move(v), "analytic"));
    }
    tb.result.metadata["rho_star"] = format_number(opt.rho_star);
    tb.result.metadata["threshold_N"] = format_number(1.0 / (1.0 - opt.rho_star));
    if (mode != "independent")
        tb.result.metadata["optimal_transmitters_common"] =
            std::to_string(optimal_transmitter_count_common(opt.rho_star, n_max, outage_at));
    return tb.result;
}

inline SweepResult cmd_simulate(const Invocation& inv, const Scenario& s) {
    const std::uint64_t trials = inv.trials.value_or(s.mc.trials);
    const std::uint64_t seed = inv.seed.value_or(s.mc.seed);
    const Link link = s.link();
    double rho;
    if (inv.rho) {
        rho = *inv.rho;
    } else {
        SearchConfig search = s.search;
        search.workers = inv.jobs;
        rho = optimize_save_ratio(link, search).rho_star;
    }
    const auto est = estimate_outage(s.system, rho, s.harvest, s.channel, trials, seed, inv.jobs);
    const auto b = link.breakdown(rho);
    auto cols = system_columns();
    cols.push_back("rho");
    TableBuilder tb(cols, {"mc_outage", "mc_stderr", "mc_circuit_outage", "mc_channel_outage", "analytic_outage",
                           "z_score"});
    auto in = system_values(s.system);
    in.push_back(rho);
    const double n = static_cast<double>(trials);
    const double z = est.std_error > 0.0 ? (est.point - b.total) / est.std_error : 0.0;
    tb.result.rows.push_back(tb.row(in,
                                    {est.point, est.std_error, static_cast<double>(est.circuit_count) / n,
                                     static_cast<double>(est.channel_count) / n, b.total, z},
                                    "analytic+monte-carlo"));
    tb.result.metadata["seed"] = std::to_string(seed);
    tb.result.metadata["trials"] = std::to_string(trials);
    return tb.result;
}

inline std::string emit_report(const ValidationReport& report, OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out = "module,check,passed,detail\n";
        for (const auto& c : report.checks)
            out += csv_field(c.module) + "," + csv_field(c.name) + "," + (c.passed ? "true" : "false") + "," +
                   csv_field(c.detail) + "\n";
        return out;
    }
    nlohmann::ordered_json doc;
    doc["passed"] = report.passed();
    doc["failures"] = report.failures();
    doc["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks)
        doc["checks"].push_back({{"module", c.module}, {"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return doc.dump(2) + "\n";
}

inline void write_output(const Invocation& inv, const std::string& text, std::ostream& out) {
    if (!inv.out) {
        out << text;
        return;
    }
    std::ofstream file(*inv.out, std::ios::binary);
    if (!file) throw IoError("cannot open output file: " + *inv.out);
    file << text;
    if (!file) throw IoError("failed writing output file: " + *inv.out);
}

inline void print_diagnostic(std::ostream& err, const std::string& kind, const std::string& message,
                             const std::vector<std::string>& problems = {}) {
    nlohmann::ordered_json doc{{"error", kind}, {"message", message}};
    if (!problems.empty()) doc["problems"] = problems;
    err << doc.dump() << "\n";
}

// Rejects flags that have no meaning for the command.
inline void check_flags(const Invocation& inv) {
    const auto& c = inv.command;
    if (std::find(command_names().begin(), command_names().end(), c) == command_names().end())
        throw UsageError("unknown command '" + c + "'");
    forbid(inv.rho && (c == "optimize" || c == "network" || c == "diversity" || c == "validate"), "--rho", c);
    forbid(!inv.axes.empty() && c != "sweep" && c != "diversity", "--axis", c);
    forbid((inv.n_max || inv.mode) && c != "network", inv.n_max ? "--n-max" : "--mode", c);
    forbid(inv.trials && c != "simulate" && c != "sweep" && c != "validate", "--trials", c);
    forbid(inv.seed && c != "simulate" && c != "sweep" && c != "validate", "--seed", c);
    if (inv.rho && !(*inv.rho >= 0.0 && *inv.rho < 1.0)) throw UsageError("--rho must lie in [0, 1)");
    if (inv.trials && *inv.trials < monte_carlo_min_trials) throw UsageError("--trials must be >= 1000");
}

}  // namespace detail

/// Executes one command. Results go to `out` (or --out); diagnostics go to `err` as one JSON line.
inline int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
    try {
        detail::check_flags(inv);
        const Scenario scenario = load_scenario(inv.scenario_path);

        if (inv.command == "validate") {
            Scenario s = scenario;
            if (inv.seed) s.mc.seed = *inv.seed;
            ValidationOptions vopt;
            if (inv.trials) vopt.mc_trials = *inv.trials;
            vopt.workers = inv.jobs;
            const auto report = validate_scenario(s, vopt);
            detail::write_output(inv, detail::emit_report(report, inv.format.value_or(OutputFormat::json)), out);
            return report.passed() ? exit_ok : exit_failure;
        }

        SweepResult result;
        OutputFormat fallback = OutputFormat::csv;
        if (inv.command == "outage") {
            result = detail::cmd_outage(inv, scenario);
            fallback = OutputFormat::json;
        } else if (inv.command == "optimize") {
            result = detail::cmd_optimize(inv, scenario);
            fallback = OutputFormat::json;
        } else if (inv.command == "sweep") {
            result = detail::cmd_sweep(inv, scenario);
        } else if (inv.command == "diversity") {
            result = detail::cmd_diversity(inv, scenario);
        } else if (inv.command == "network") {
            result = detail::cmd_network(inv, scenario);
        } else {
            result = detail::cmd_simulate(inv, scenario);
            fallback = OutputFormat::json;
        }
        for (auto& [k, v] : detail::base_metadata(inv, scenario)) result.metadata[k] = v;
        detail::write_output(inv, emit_results(result, inv.format.value_or(fallback)), out);
        return exit_ok;
    } catch (const UsageError& e) {
        detail::print_diagnostic(err, "usage", e.what());
        return exit_usage;
    } catch (const ValidationError& e) {
        detail::print_diagnostic(err, "validation", "scenario validation failed", e.problems());
        return exit_failure;
    } catch (const IoError& e) {
        detail::print_diagnostic(err, "io", e.what());
        return exit_failure;
    } catch (const ParseError& e) {
        detail::print_diagnostic(err, "parse", e.what());
        return exit_failure;
    } catch (const NumericalError& e) {
        detail::print_diagnostic(err, "numerical", e.what());
        return exit_failure;
    } catch (const std::exception& e) {
        detail::print_diagnostic(err, "error", e.what());
        return exit_failure;
    }
}

}  // namespace sth

#endif
