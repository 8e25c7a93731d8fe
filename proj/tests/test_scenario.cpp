#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "sth/scenario.hpp"

namespace {

std::string scenario_path(const std::string& name) { return std::string(STH_SCENARIO_DIR) + "/" + name; }

const char* minimal = R"({
  "system": {"eta": 0.9, "circuit_power": 50, "bits": 2},
  "harvest": {"kind": "uniform", "params": {"peak": 100}},
  "channel": {"kind": "exponential", "params": {"mean": 50}}
})";

std::vector<std::string> problems_of(const std::string& text) {
    try {
        sth::parse_scenario(text);
    } catch (const sth::ValidationError& e) {
        return e.problems();
    }
    return {};
}

bool mentions(const std::vector<std::string>& problems, const std::string& needle) {
    for (const auto& p : problems)
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

}  // namespace

TEST(Scenario, BundledFilesLoad) {
    for (const char* name : {"fig3.scenario", "fig5.scenario", "fig6.scenario", "fig8.scenario", "default.scenario",
                             "compare_eta.scenario", "compare_pc.scenario"}) {
        EXPECT_NO_THROW(sth::load_scenario(scenario_path(name))) << name;
    }
}

TEST(Scenario, Fig3Contents) {
    const auto s = sth::load_scenario(scenario_path("fig3.scenario"));
    EXPECT_EQ(s.harvest.kind(), sth::HarvestKind::uniform);
    EXPECT_EQ(s.harvest.peak(), 100.0);
    EXPECT_EQ(s.channel.mean(), 50.0);
    EXPECT_EQ(s.system.rate(), 2.0);
    ASSERT_EQ(s.sweep_axes.size(), 2u);
    EXPECT_EQ(s.sweep_axes[0].name, "eta");
    EXPECT_EQ(s.sweep_axes[1].name, "circuit_power");
    EXPECT_EQ(s.sweep_axes[0].values().size(), 21u);
    EXPECT_DOUBLE_EQ(s.sweep_axes[0].values().back(), 1.0);
}

TEST(Scenario, DefaultsApply) {
    const auto s = sth::parse_scenario(minimal);
    EXPECT_EQ(s.system.frame, 1.0);
    EXPECT_EQ(s.search.grid_points, 2000u);
    EXPECT_EQ(s.mc.trials, 1000000u);
    EXPECT_FALSE(s.diversity.has_value());
    EXPECT_FALSE(s.network.has_value());
}

TEST(Scenario, EtaOutOfRangeNamesField) {
    std::string text = minimal;
    text.replace(text.find("0.9"), 3, "1.5");
    const auto p = problems_of(text);
    ASSERT_FALSE(p.empty());
    EXPECT_TRUE(mentions(p, "system.eta"));
}

TEST(Scenario, ReportsEveryViolation) {
    const auto p = problems_of(R"({
      "system": {"eta": -1, "circuit_power": -3, "bits": 2, "colour": 1},
      "harvest": {"kind": "uniform", "params": {"peak": 0}},
      "channel": {"kind": "nakagami", "params": {}},
      "mc": {"trials": 10}
    })");
    EXPECT_TRUE(mentions(p, "system.eta"));
    EXPECT_TRUE(mentions(p, "system.circuit_power"));
    EXPECT_TRUE(mentions(p, "system.colour: unknown key"));
    EXPECT_TRUE(mentions(p, "harvest.params.peak"));
    EXPECT_TRUE(mentions(p, "channel.kind"));
    EXPECT_TRUE(mentions(p, "mc.trials"));
}

TEST(Scenario, UnknownTopLevelKeyRejected) {
    std::string text = minimal;
    text.insert(text.rfind('}'), R"(, "extra": true)");
    EXPECT_TRUE(mentions(problems_of(text), "scenario.extra: unknown key"));
}

TEST(Scenario, MissingSections) {
    const auto p = problems_of(R"({"system": {"eta": 1, "circuit_power": 0, "bits": 2}})");
    EXPECT_TRUE(mentions(p, "harvest: missing"));
    EXPECT_TRUE(mentions(p, "channel: missing"));
}

TEST(Scenario, DiversitySection) {
    std::string text = minimal;
    text.insert(text.rfind('}'), R"(, "diversity": {"rate": 2, "power": {"shape": 2, "mean": 40}, "lambda_gamma": 3,
        "betas": [1, 4], "snr_db": {"start": 10, "stop": 30, "steps": 3}})");
    const auto s = sth::parse_scenario(text);
    ASSERT_TRUE(s.diversity);
    EXPECT_DOUBLE_EQ(s.diversity->params.threshold, 3.0);
    EXPECT_DOUBLE_EQ(s.diversity->params.power.mean(), 40.0);
    EXPECT_DOUBLE_EQ(s.diversity->params.power.shape(), 2.0);
    EXPECT_EQ(s.diversity->betas.size(), 2u);
    EXPECT_EQ(s.diversity->snr_db.values().size(), 3u);

    std::string both = minimal;
    both.insert(both.rfind('}'), R"(, "diversity": {"rate": 2, "threshold": 3})");
    EXPECT_TRUE(mentions(problems_of(both), "diversity"));
}

TEST(Scenario, NetworkSection) {
    std::string text = minimal;
    text.insert(text.rfind('}'), R"(, "network": {"transmitters": 4, "mode": "common"})");
    const auto s = sth::parse_scenario(text);
    ASSERT_TRUE(s.network);
    EXPECT_EQ(s.network->transmitters, 4);
    EXPECT_EQ(s.network->mode, sth::DataMode::common);

    std::string bad = minimal;
    bad.insert(bad.rfind('}'), R"(, "network": {"transmitters": 0, "mode": "broadcast"})");
    const auto p = problems_of(bad);
    EXPECT_TRUE(mentions(p, "network.transmitters"));
    EXPECT_TRUE(mentions(p, "network.mode"));
}

TEST(Scenario, MissingFileIsIoError) {
    EXPECT_THROW(sth::load_scenario(scenario_path("does-not-exist.scenario")), sth::IoError);
}

TEST(Scenario, EmptyFileIsParseError) {
    const auto path = std::filesystem::path(STH_TEST_TMP_DIR) / "empty.scenario";
    std::ofstream(path) << "  \n";
    EXPECT_THROW(sth::load_scenario(path), sth::ParseError);
}

TEST(Scenario, MalformedJsonIsParseError) {
    EXPECT_THROW(sth::parse_scenario("{\"system\": "), sth::ParseError);
    EXPECT_THROW(sth::parse_scenario("[1, 2]"), sth::ParseError);
}

TEST(Scenario, TypeErrors) {
    const auto p = problems_of(R"({
      "system": {"eta": "high", "circuit_power": 0, "bits": 2},
      "harvest": {"kind": 3},
      "channel": {"kind": "exponential", "params": {"mean": 1}}
    })");
    EXPECT_TRUE(mentions(p, "system.eta: expected a number"));
    EXPECT_TRUE(mentions(p, "harvest.kind: expected a string"));
}
