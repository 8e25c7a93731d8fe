#ifndef STH_SCENARIO_HPP
#define STH_SCENARIO_HPP

// Scenario files: strict JSON documents describing one link (system knobs,
// harvest and channel laws) plus optional diversity, network, search, Monte
// Carlo and sweep settings. Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sth/diversity.hpp"
#include "sth/error.hpp"
#include "sth/models.hpp"
#include "sth/network.hpp"
#include "sth/optimizer.hpp"
#include "sth/outage.hpp"

namespace sth {

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

/// Every violated invariant, each prefixed with its field path.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "scenario validation failed:";
        for (const auto& s : items) out += "\n  " + s;
        return out;
    }

    std::vector<std::string> problems_;
};

struct AxisSpec {
    std::string name;
    double start = 0.0;
    double stop = 0.0;
    int steps = 1;

    std::vector<double> values() const {
        std::vector<double> v;
        v.reserve(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) {
            v.push_back(steps == 1 ? start : start + (stop - start) * i / (steps - 1));
        }
        return v;
    }
};

struct MonteCarloConfig {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
};

struct DiversityConfig {
    DiversityParams params;
    std::vector<double> betas{1.0, 2.0, 3.0, 4.0, 5.0};
    AxisSpec snr_db{"snr", 0.0, 60.0, 13};
};

struct Scenario {
    std::string name;
    SystemParams system;
    HarvestModel harvest = HarvestModel::uniform(100.0);
    ChannelModel channel = ChannelModel::rayleigh(50.0);
    std::optional<DiversityConfig> diversity;
    std::optional<NetworkParams> network;
    SearchConfig search;
    MonteCarloConfig mc;
    std::vector<AxisSpec> sweep_axes;

    Link link() const { return Link{system, harvest, channel}; }
};

namespace detail {

using json = nlohmann::json;

class Reader {
public:
    std::vector<std::string> problems;

    // Reports keys outside the allowed set.
    void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) {
            problems.push_back(path + ": expected an object");
            return;
        }
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, _] : obj.items()) {
            if (!ok.contains(key)) problems.push_back(path + "." + key + ": unknown key");
        }
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required,
                                 std::optional<double> fallback = std::nullopt) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) problems.push_back(path + "." + key + ": missing");
            return fallback;
        }
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            problems.push_back(path + "." + key + ": expected a number");
            return fallback;
        }
        return v.get<double>();
    }

    std::optional<std::string> text(const json& obj, const std::string& path, const char* key, bool required) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) problems.push_back(path + "." + key + ": missing");
            return std::nullopt;
        }
        const auto& v = obj.at(key);
        if (!v.is_string()) {
            problems.push_back(path + "." + key + ": expected a string");
            return std::nullopt;
        }
        return v.get<std::string>();
    }

    // Runs a model factory, turning its ParameterError into a field-path diagnostic.
    template <typename Make>
    auto build(const std::string& path, Make&& make) -> std::optional<decltype(make())> {
        try {
            return make();
        } catch (const ParameterError& e) {
            problems.push_back(path + ": " + e.what());
            return std::nullopt;
        }
    }
};

inline std::optional<AxisSpec> read_axis(Reader& r, const json& obj, const std::string& path) {
    r.check_keys(obj, path, {"name", "start", "stop", "steps"});
    AxisSpec axis;
    axis.name = r.text(obj, path, "name", true).value_or("");
    axis.start = r.number(obj, path, "start", true).value_or(0.0);
    axis.stop = r.number(obj, path, "stop", true).value_or(0.0);
    const double steps = r.number(obj, path, "steps", true).value_or(1.0);
    if (!(steps >= 1.0) || steps != std::floor(steps)) {
        r.problems.push_back(path + ".steps: must be a positive integer");
        return std::nullopt;
    }
    axis.steps = static_cast<int>(steps);
    return axis;
}

inline std::optional<HarvestModel> read_harvest(Reader& r, const json& obj, const std::string& path) {
    r.check_keys(obj, path, {"kind", "params"});
    const auto kind = r.text(obj, path, "kind", true);
    if (!kind) return std::nullopt;
    const json params = obj.contains("params") ? obj.at("params") : json::object();
    const std::string ppath = path + ".params";
    if (*kind == "uniform") {
        r.check_keys(params, ppath, {"peak"});
        const auto peak = r.number(params, ppath, "peak", true);
        if (!peak) return std::nullopt;
        return r.build(ppath + ".peak", [&] { return HarvestModel::uniform(*peak); });
    }
    if (*kind == "truncated-exponential") {
        r.check_keys(params, ppath, {"scale", "peak"});
        const auto scale = r.number(params, ppath, "scale", true);
        const auto peak = r.number(params, ppath, "peak", true);
        if (!scale || !peak) return std::nullopt;
        return r.build(ppath, [&] { return HarvestModel::truncated_exponential(*scale, *peak); });
    }
    if (*kind == "point-mass") {
        r.check_keys(params, ppath, {"value"});
        const auto value = r.number(params, ppath, "value", true);
        if (!value) return std::nullopt;
        return r.build(ppath + ".value", [&] { return HarvestModel::point_mass(*value); });
    }
    r.problems.push_back(path + ".kind: unknown harvest kind '" + *kind + "'");
    return std::nullopt;
}

inline std::optional<ChannelModel> read_channel(Reader& r, const json& obj, const std::string& path) {
    r.check_keys(obj, path, {"kind", "params"});
    const auto kind = r.text(obj, path, "kind", true);
    if (!kind) return std::nullopt;
    const json params = obj.contains("params") ? obj.at("params") : json::object();
    const std::string ppath = path + ".params";
    if (*kind == "exponential") {
        r.check_keys(params, ppath, {"mean"});
        const auto mean = r.number(params, ppath, "mean", true);
        if (!mean) return std::nullopt;
        return r.build(ppath + ".mean", [&] { return ChannelModel::rayleigh(*mean); });
    }
    if (*kind == "point-mass") {
        r.check_keys(params, ppath, {"snr"});
        const auto snr = r.number(params, ppath, "snr", true);
        if (!snr) return std::nullopt;
        return r.build(ppath + ".snr", [&] { return ChannelModel::point_mass(*snr); });
    }
    r.problems.push_back(path + ".kind: unknown channel kind '" + *kind + "'");
    return std::nullopt;
}

}  // namespace detail

/// Parses and validates a scenario document held in memory.
inline Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>") {
    using detail::json;
    json doc;
    try {
        doc = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(source + ": top level must be an object");

    detail::Reader r;
    Scenario s;
    r.check_keys(doc, "scenario",
                 {"name", "system", "harvest", "channel", "diversity", "network", "search", "mc", "sweep"});
    s.name = r.text(doc, "scenario", "name", false).value_or("");

    if (doc.contains("system")) {
        const auto& sys = doc.at("system");
        r.check_keys(sys, "system", {"eta", "circuit_power", "bits", "frame"});
        s.system.eta = r.number(sys, "system", "eta", true).value_or(1.0);
        s.system.circuit_power = r.number(sys, "system", "circuit_power", true).value_or(0.0);
        s.system.bits = r.number(sys, "system", "bits", true).value_or(2.0);
        s.system.frame = r.number(sys, "system", "frame", false, 1.0).value_or(1.0);
        for (auto& v : s.system.violations()) r.problems.push_back(std::move(v));
    } else {
        r.problems.push_back("system: missing");
    }

    if (doc.contains("harvest")) {
        if (auto h = detail::read_harvest(r, doc.at("harvest"), "harvest")) s.harvest = *h;
    } else {
        r.problems.push_back("harvest: missing");
    }

    if (doc.contains("channel")) {
        if (auto c = detail::read_channel(r, doc.at("channel"), "channel")) s.channel = *c;
    } else {
        r.problems.push_back("channel: missing");
    }

    if (doc.contains("search")) {
        const auto& sc = doc.at("search");
        r.check_keys(sc, "search", {"grid_points", "refine_tol", "workers"});
        const double points = r.number(sc, "search", "grid_points", false, 2000.0).value_or(2000.0);
        if (!(points >= 1000.0) || points != std::floor(points))
            r.problems.push_back("search.grid_points: must be an integer >= 1000");
        else
            s.search.grid_points = static_cast<std::size_t>(points);
        s.search.refine_tol = r.number(sc, "search", "refine_tol", false, 1e-6).value_or(1e-6);
        if (!(s.search.refine_tol > 0.0 && s.search.refine_tol < 1e-2))
            r.problems.push_back("search.refine_tol: must lie in (0, 0.01)");
        const double workers = r.number(sc, "search", "workers", false, 1.0).value_or(1.0);
        if (!(workers >= 0.0) || workers != std::floor(workers))
            r.problems.push_back("search.workers: must be a non-negative integer");
        else
            s.search.workers = static_cast<unsigned>(workers);
    }

    if (doc.contains("mc")) {
        const auto& mc = doc.at("mc");
        r.check_keys(mc, "mc", {"trials", "seed"});
        const double trials = r.number(mc, "mc", "trials", false, 1e6).value_or(1e6);
        const double seed = r.number(mc, "mc", "seed", false, 1.0).value_or(1.0);
        if (!(trials >= 1000.0) || trials != std::floor(trials))
            r.problems.push_back("mc.trials: must be an integer >= 1000");
        else
            s.mc.trials = static_cast<std::uint64_t>(trials);
        if (!(seed >= 0.0) || seed != std::floor(seed))
            r.problems.push_back("mc.seed: must be a non-negative integer");
        else
            s.mc.seed = static_cast<std::uint64_t>(seed);
    }

    if (doc.contains("network")) {
        const auto& net = doc.at("network");
        r.check_keys(net, "network", {"transmitters", "mode"});
        NetworkParams np;
        const double n = r.number(net, "network", "transmitters", false, 1.0).value_or(1.0);
        if (!(n >= 1.0) || n != std::floor(n))
            r.problems.push_back("network.transmitters: must be an integer >= 1");
        else
            np.transmitters = static_cast<int>(n);
        const auto mode = r.text(net, "network", "mode", false).value_or("independent");
        if (mode == "independent")
            np.mode = DataMode::independent;
        else if (mode == "common")
            np.mode = DataMode::common;
        else
            r.problems.push_back("network.mode: must be 'independent' or 'common'");
        s.network = np;
    }

    if (doc.contains("diversity")) {
        const auto& dv = doc.at("diversity");
        r.check_keys(dv, "diversity", {"threshold", "rate", "power", "lambda_gamma", "betas", "snr_db"});
        DiversityConfig cfg;
        if (dv.contains("threshold") && dv.contains("rate"))
            r.problems.push_back("diversity: give either threshold or rate, not both");
        if (dv.contains("rate")) {
            const double rate = r.number(dv, "diversity", "rate", true).value_or(2.0);
            if (rate > 0.0) cfg.params.threshold = snr_threshold_for_rate(rate);
            else r.problems.push_back("diversity.rate: must be > 0");
        } else {
            cfg.params.threshold = r.number(dv, "diversity", "threshold", false, 3.0).value_or(3.0);
            if (!(cfg.params.threshold > 0.0)) r.problems.push_back("diversity.threshold: must be > 0");
        }
        cfg.params.lambda_gamma = r.number(dv, "diversity", "lambda_gamma", false, 1.0).value_or(1.0);
        if (!(cfg.params.lambda_gamma > 0.0)) r.problems.push_back("diversity.lambda_gamma: must be > 0");
        if (dv.contains("power")) {
            const auto& pw = dv.at("power");
            r.check_keys(pw, "diversity.power", {"shape", "mean"});
            const auto shape = r.number(pw, "diversity.power", "shape", false, 1.0);
            const auto mean = r.number(pw, "diversity.power", "mean", true);
            if (shape && mean) {
                if (auto p = r.build("diversity.power", [&] { return PowerModel::with_mean(*shape, *mean); }))
                    cfg.params.power = *p;
            }
        }
        if (dv.contains("betas")) {
            const auto& b = dv.at("betas");
            cfg.betas.clear();
            if (!b.is_array()) {
                r.problems.push_back("diversity.betas: expected an array");
            } else {
                for (const auto& v : b) {
                    if (!v.is_number() || !(v.get<double>() > 0.0))
                        r.problems.push_back("diversity.betas: entries must be numbers > 0");
                    else
                        cfg.betas.push_back(v.get<double>());
                }
            }
        }
        if (dv.contains("snr_db")) {
            auto axis_doc = dv.at("snr_db");
            if (axis_doc.is_object() && !axis_doc.contains("name")) axis_doc["name"] = "snr";
            if (auto a = detail::read_axis(r, axis_doc, "diversity.snr_db")) cfg.snr_db = *a;
        }
        s.diversity = cfg;
    }

    if (doc.contains("sweep")) {
        const auto& sw = doc.at("sweep");
        r.check_keys(sw, "sweep", {"axes"});
        if (sw.contains("axes") && sw.at("axes").is_array()) {
            int i = 0;
            for (const auto& a : sw.at("axes")) {
                if (auto axis = detail::read_axis(r, a, "sweep.axes[" + std::to_string(i++) + "]"))
                    s.sweep_axes.push_back(*axis);
            }
        } else {
            r.problems.push_back("sweep.axes: expected an array");
        }
    }

    if (!r.problems.empty()) throw ValidationError(std::move(r.problems));
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ParseError(path.string() + ": empty file");
    return parse_scenario(text, path.string());
}

}  // namespace sth

#endif
