#include <gtest/gtest.h>

#include "hc/verify.hpp"

using namespace hc;
using nlohmann::json;

namespace {

const VerificationCheck& find(const VerificationReport& report, const std::string& name) {
  for (const auto& c : report.checks) {
    if (c.name == name) return c;
  }
  throw std::runtime_error("missing check " + name);
}

ScenarioConfig fig1_config() {
  return parse_config(json::parse(R"({
    "potential": {"type": "ellipsoid", "a": 0.015, "b": 0.008, "c": 0.008, "K_n": 1e8, "alpha": 0.5},
    "m": 0.05, "v0": [0.5, 0.99, 1.5], "refs": {"K": 1, "M": 0.75}, "damping": {"C0": [0, 0.5]}
  })"));
}

}  // namespace

TEST(Verify, ReferenceScenarioPassesEveryCheck) {
  const auto report = run_verification(fig1_config());
  for (const auto& c : report.checks) {
    EXPECT_NE(c.status, CheckStatus::Fail) << c.name << " measured " << c.measured << " " << c.detail;
    if (c.name != "converse_nonconstant_C_star") EXPECT_NE(c.status, CheckStatus::Skipped) << c.name;
  }
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(find(report, "bound_verlet_energy_drift").status, CheckStatus::Info);
  const auto doc = report.to_json();
  EXPECT_TRUE(doc.at("passed").get<bool>());
  EXPECT_EQ(doc.at("checks").size(), report.checks.size());
  EXPECT_NE(report.summary().find("restitution_spread"), std::string::npos);
}

TEST(Verify, ConstantDashpotDemonstratesNecessity) {
  const auto config = parse_config(json::parse(R"({
    "potential": {"type": "power_law", "k": 1e6, "p": 2}, "m": 0.05, "v0": [0.5, 1.0],
    "damping": {"law": "constant", "C": 0.5}
  })"));
  const auto report = run_verification(config);
  const auto& converse = find(report, "converse_nonconstant_C_star");
  EXPECT_EQ(converse.status, CheckStatus::Pass);
  EXPECT_GT(converse.measured, 0.1);
  EXPECT_EQ(find(report, "restitution_match").status, CheckStatus::Skipped);
  EXPECT_TRUE(report.passed());
}

TEST(Verify, ConservativeOnlySkipsDampedChecks) {
  const auto config = parse_config(json::parse(R"({
    "potential": {"type": "power_law", "k": 4, "p": 1}, "m": 1, "v0": 1
  })"));
  const auto report = run_verification(config);
  EXPECT_TRUE(report.passed());
  for (const char* name : {"transformed_damping_constancy", "damped_spiral_match", "log_spiral_linearity",
                           "restitution_match", "restitution_spread", "converse_nonconstant_C_star",
                           "stiffening_shortcut_equivalence"}) {
    EXPECT_EQ(find(report, name).status, CheckStatus::Skipped) << name;
  }
  EXPECT_EQ(find(report, "harmonic_energy_conservation").status, CheckStatus::Pass);
}

TEST(Verify, DegenerateContactSkipsBoundChecks) {
  const auto config = parse_config(json::parse(R"({
    "potential": {"type": "power_law", "k": 1e3, "p": 0.5}, "m": 0.05, "v0": [0.5, 1.0]
  })"));
  const auto report = run_verification(config);
  EXPECT_EQ(find(report, "dt_safe_km_invariance").status, CheckStatus::Skipped);
  EXPECT_EQ(find(report, "bound_verlet_completes").status, CheckStatus::Skipped);
  EXPECT_EQ(find(report, "duration_consistency").status, CheckStatus::Pass);
}

TEST(Verify, StatusNames) {
  EXPECT_EQ(to_string(CheckStatus::Pass), "pass");
  EXPECT_EQ(to_string(CheckStatus::Fail), "fail");
  EXPECT_EQ(to_string(CheckStatus::Skipped), "skipped");
  EXPECT_EQ(to_string(CheckStatus::Info), "info");
}
