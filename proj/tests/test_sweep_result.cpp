#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "sth/sweep_result.hpp"

namespace {

sth::SweepResult two_point() {
    sth::SweepResult r;
    r.axes.push_back({"eta", {0.5, 1.0}});
    r.input_columns = {"eta"};
    r.output_columns = {"total_outage", "mc_outage", "mc_stderr"};
    r.rows.push_back({{0.5}, {0.123456789012345, 0.1234, 1e-4}, "analytic+monte-carlo"});
    r.rows.push_back({{1.0}, {1.0 / 3.0, 0.3333, 2e-4}, "analytic+monte-carlo"});
    r.metadata = {{"tool_version", "1.0.0"}, {"seed", "42"}};
    return r;
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(SweepResult, CsvLayout) {
    const auto csv = sth::emit_results(two_point(), sth::OutputFormat::csv);
    EXPECT_EQ(count_lines(csv), 3u);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "eta,total_outage,mc_outage,mc_stderr,provenance");
    EXPECT_NE(csv.find("0.333333333333333"), std::string::npos);  // >= 10 significant digits
    EXPECT_NE(csv.find("0.123456789012345"), std::string::npos);
}

TEST(SweepResult, JsonRoundTripIsByteIdentical) {
    const auto json = sth::emit_results(two_point(), sth::OutputFormat::json);
    const auto parsed = sth::parse_result_json(json);
    EXPECT_EQ(sth::emit_results(parsed, sth::OutputFormat::json), json);
    EXPECT_EQ(parsed.output(1, "total_outage"), 1.0 / 3.0);
}

TEST(SweepResult, JsonRoundTripOnRandomValues) {
    gen::Source src(71);
    for (int trial = 0; trial < 20; ++trial) {
        sth::SweepResult r;
        const int n = src.integer(1, 30);
        sth::SweepAxis axis{"rho", {}};
        for (int i = 0; i < n; ++i) axis.values.push_back(src.uniform(0.0, 1.0));
        r.axes.push_back(axis);
        r.input_columns = {"rho"};
        r.output_columns = {"a", "b"};
        for (int i = 0; i < n; ++i) {
            const double tiny = src.log_uniform(1e-300, 1e-3);
            r.rows.push_back({{axis.values[i]}, {tiny, i % 5 == 0 ? NAN : src.uniform(-1e6, 1e6)}, "analytic"});
        }
        const auto json = sth::to_json(r);
        const auto back = sth::parse_result_json(json);
        EXPECT_EQ(sth::to_json(back), json);
        for (int i = 0; i < n; ++i) {
            EXPECT_EQ(back.rows[i].outputs[0], r.rows[i].outputs[0]);
            EXPECT_EQ(back.rows[i].inputs[0], r.rows[i].inputs[0]);
        }
    }
}

TEST(SweepResult, MonteCarloColumnsCarryStderr) {
    const auto r = two_point();
    for (std::size_t i = 0; i < r.output_columns.size(); ++i) {
        const auto& c = r.output_columns[i];
        if (c.rfind("mc_", 0) == 0 && c != "mc_stderr") {
            EXPECT_NO_THROW(r.output_index("mc_stderr"));
        }
    }
    const auto csv = sth::to_csv(r);
    EXPECT_NE(csv.find("mc_stderr"), std::string::npos);
}

TEST(SweepResult, RefusesEmptyOrInconsistent) {
    sth::SweepResult empty;
    EXPECT_THROW(sth::emit_results(empty, sth::OutputFormat::csv), sth::Error);
    EXPECT_THROW(sth::emit_results(empty, sth::OutputFormat::json), sth::Error);

    auto r = two_point();
    r.rows.pop_back();  // axes imply two rows
    EXPECT_THROW(sth::to_csv(r), sth::Error);

    auto unsorted = two_point();
    unsorted.input_columns = {"z", "a"};
    EXPECT_THROW(sth::to_csv(unsorted), sth::Error);

    auto no_prov = two_point();
    no_prov.rows[0].provenance.clear();
    EXPECT_THROW(sth::to_csv(no_prov), sth::Error);
}

TEST(SweepResult, RowCountIsProductOfAxes) {
    sth::SweepResult r;
    r.axes = {{"a", {1, 2, 3}}, {"b", {1, 2}}};
    EXPECT_EQ(r.expected_rows(), 6u);
    r.axes.clear();
    EXPECT_EQ(r.expected_rows(), 1u);
}

TEST(SweepResult, CsvQuotesAwkwardFields) {
    auto r = two_point();
    r.rows[0].provenance = "a,b";
    EXPECT_NE(sth::to_csv(r).find("\"a,b\""), std::string::npos);
}
