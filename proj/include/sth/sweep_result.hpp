#ifndef STH_SWEEP_RESULT_HPP
#define STH_SWEEP_RESULT_HPP

// Tabular results of a command: named axes, one row per grid point, and a
// metadata block. Serialises to CSV or JSON; the JSON form parses back into
// an identical SweepResult.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sth/error.hpp"

namespace sth {

enum class OutputFormat { csv, json };

struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

struct SweepRow {
    std::vector<double> inputs;   ///< aligned with SweepResult::input_columns
    std::vector<double> outputs;  ///< aligned with SweepResult::output_columns
    std::string provenance;       ///< "analytic", "monte-carlo" or "analytic+monte-carlo"
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<std::string> input_columns;  ///< kept sorted
    std::vector<std::string> output_columns;
    std::vector<SweepRow> rows;
    std::map<std::string, std::string> metadata;

    /// Product of axis lengths; 1 for a single-point result.
    std::size_t expected_rows() const {
        std::size_t n = 1;
        for (const auto& a : axes) n *= a.values.size();
        return n;
    }

    std::size_t input_index(std::string_view name) const { return index_of(input_columns, name); }
    std::size_t output_index(std::string_view name) const { return index_of(output_columns, name); }

    double output(std::size_t row, std::string_view name) const { return rows.at(row).outputs.at(output_index(name)); }
    double input(std::size_t row, std::string_view name) const { return rows.at(row).inputs.at(input_index(name)); }

    void validate() const {
        if (rows.empty()) throw Error("refusing to emit an empty result");
        if (!std::is_sorted(input_columns.begin(), input_columns.end()))
            throw Error("result input columns must be sorted");
        if (rows.size() != expected_rows())
            throw Error("result has " + std::to_string(rows.size()) + " rows but axes imply " +
                        std::to_string(expected_rows()));
        for (const auto& r : rows) {
            if (r.inputs.size() != input_columns.size() || r.outputs.size() != output_columns.size())
                throw Error("result row does not match the column layout");
            if (r.provenance.empty()) throw Error("result row lacks provenance");
        }
    }

private:
    static std::size_t index_of(const std::vector<std::string>& cols, std::string_view name) {
        const auto it = std::find(cols.begin(), cols.end(), name);
        if (it == cols.end()) throw Error("no column named '" + std::string(name) + "'");
        return static_cast<std::size_t>(it - cols.begin());
    }
};

namespace detail {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline nlohmann::ordered_json number_json(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline double json_number(const nlohmann::ordered_json& j) {
    return j.is_null() ? std::nan("") : j.get<double>();
}

}  // namespace detail

inline std::string to_csv(const SweepResult& result) {
    result.validate();
    std::string out;
    for (const auto& c : result.input_columns) out += detail::csv_field(c) + ",";
    for (const auto& c : result.output_columns) out += detail::csv_field(c) + ",";
    out += "provenance\n";
    for (const auto& row : result.rows) {
        for (double v : row.inputs) out += detail::format_number(v) + ",";
        for (double v : row.outputs) out += detail::format_number(v) + ",";
        out += detail::csv_field(row.provenance) + "\n";
    }
    return out;
}

inline std::string to_json(const SweepResult& result) {
    result.validate();
    using nlohmann::ordered_json;
    ordered_json doc;
    ordered_json axes = ordered_json::array();
    for (const auto& a : result.axes) {
        ordered_json values = ordered_json::array();
        for (double v : a.values) values.push_back(detail::number_json(v));
        axes.push_back({{"name", a.name}, {"values", values}});
    }
    doc["axes"] = axes;
    doc["input_columns"] = result.input_columns;
    doc["output_columns"] = result.output_columns;
    ordered_json rows = ordered_json::array();
    for (const auto& r : result.rows) {
        ordered_json inputs = ordered_json::object();
        for (std::size_t i = 0; i < r.inputs.size(); ++i)
            inputs[result.input_columns[i]] = detail::number_json(r.inputs[i]);
        ordered_json outputs = ordered_json::object();
        for (std::size_t i = 0; i < r.outputs.size(); ++i)
            outputs[result.output_columns[i]] = detail::number_json(r.outputs[i]);
        rows.push_back({{"inputs", inputs}, {"outputs", outputs}, {"provenance", r.provenance}});
    }
    doc["rows"] = rows;
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : result.metadata) meta[k] = v;
    doc["metadata"] = meta;
    return doc.dump(2) + "\n";
}

inline std::string emit_results(const SweepResult& result, OutputFormat format) {
    return format == OutputFormat::csv ? to_csv(result) : to_json(result);
}

/// Inverse of to_json.
inline SweepResult parse_result_json(const std::string& text) {
    using nlohmann::ordered_json;
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw Error(std::string("result JSON: ") + e.what());
    }
    SweepResult r;
    try {
        for (const auto& a : doc.at("axes")) {
            SweepAxis axis{a.at("name").get<std::string>(), {}};
            for (const auto& v : a.at("values")) axis.values.push_back(detail::json_number(v));
            r.axes.push_back(std::move(axis));
        }
        r.input_columns = doc.at("input_columns").get<std::vector<std::string>>();
        r.output_columns = doc.at("output_columns").get<std::vector<std::string>>();
        for (const auto& row : doc.at("rows")) {
            SweepRow out;
            for (const auto& c : r.input_columns) out.inputs.push_back(detail::json_number(row.at("inputs").at(c)));
            for (const auto& c : r.output_columns) out.outputs.push_back(detail::json_number(row.at("outputs").at(c)));
            out.provenance = row.at("provenance").get<std::string>();
            r.rows.push_back(std::move(out));
        }
        for (const auto& [k, v] : doc.at("metadata").items()) r.metadata[k] = v.get<std::string>();
    } catch (const ordered_json::exception& e) {
        throw Error(std::string("result JSON: ") + e.what());
    }
    r.validate();
    return r;
}

}  // namespace sth

#endif
