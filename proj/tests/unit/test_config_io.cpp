#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hc/config.hpp"
#include "hc/errors.hpp"
#include "hc/io.hpp"
#include "support/fixtures.hpp"

using namespace hc;
using namespace hc::test;
using nlohmann::json;

namespace {

json fig1_document() {
  return json::parse(R"({
    "potential": {"type": "ellipsoid", "a": 0.015, "b": 0.008, "c": 0.008, "K_n": 1e8, "alpha": 0.5},
    "m": 0.05,
    "v0": [0.5, 0.99, 1.5],
    "refs": {"K": 1, "M": 0.75},
    "damping": {"C0": [0, 0.5]}
  })");
}

std::string error_of(const json& document) {
  try {
    parse_config(document);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesReferenceScenario) {
  const auto config = parse_config(fig1_document());
  EXPECT_EQ(config.mass, 0.05);
  EXPECT_EQ(config.speeds, (std::vector<double>{0.5, 0.99, 1.5}));
  EXPECT_EQ(config.refs.M(), 0.75);
  EXPECT_EQ(config.samples, 2000u);
  ASSERT_TRUE(config.damping);
  const auto variants = config.damping_variants();
  ASSERT_EQ(variants.size(), 2u);
  EXPECT_FALSE(variants[0].law);
  ASSERT_TRUE(variants[1].law);
  EXPECT_TRUE(variants[1].law->is_universal());
  EXPECT_EQ(variants[1].c0, 0.5);
  EXPECT_NE(variants[0].label, variants[1].label);
}

TEST(Config, DefaultsAndScalarSpeed) {
  const auto config = parse_config(
      json::parse(R"({"potential": {"type": "power_law", "k": 1, "p": 1}, "m": 1, "v0": 2})"));
  EXPECT_EQ(config.speeds, std::vector<double>{2.0});
  EXPECT_EQ(config.refs.K(), 1.0);
  EXPECT_FALSE(config.damping);
  ASSERT_EQ(config.damping_variants().size(), 1u);
  EXPECT_EQ(config.damping_variants()[0].label, "conservative");
}

TEST(Config, ConstantDamping) {
  auto doc = fig1_document();
  doc["damping"] = {{"law", "constant"}, {"C", 0.02}};
  const auto config = parse_config(doc);
  const auto variants = config.damping_variants();
  ASSERT_EQ(variants.size(), 1u);
  ASSERT_TRUE(variants[0].law);
  EXPECT_FALSE(variants[0].law->is_universal());
  EXPECT_EQ((*variants[0].law)(1e-3), 0.02);
}

TEST(Config, ErrorsNameTheField) {
  auto doc = fig1_document();
  doc["m"] = -0.05;
  EXPECT_EQ(error_of(doc), "m: must be positive");

  doc = fig1_document();
  doc["extra"] = 1;
  EXPECT_EQ(error_of(doc), "extra: unknown key");

  doc = fig1_document();
  doc["potential"]["alpha"] = 0;
  EXPECT_NE(error_of(doc).find("potential.alpha"), std::string::npos);

  doc = fig1_document();
  doc["potential"]["type"] = "hertz";
  EXPECT_NE(error_of(doc).find("potential.type"), std::string::npos);

  doc = fig1_document();
  doc["v0"] = json::array();
  EXPECT_NE(error_of(doc).find("v0"), std::string::npos);

  doc = fig1_document();
  doc["v0"] = {0.5, -1.0};
  EXPECT_NE(error_of(doc).find("v0[1]"), std::string::npos);

  doc = fig1_document();
  doc.erase("m");
  EXPECT_EQ(error_of(doc), "m: missing");

  doc = fig1_document();
  doc["refs"]["Q"] = 1;
  EXPECT_EQ(error_of(doc), "refs.Q: unknown key");

  doc = fig1_document();
  doc["damping"]["C0"] = {0.5, 2.0};
  EXPECT_NE(error_of(doc).find("damping.C0"), std::string::npos);

  doc = fig1_document();
  doc["samples"] = 2;
  EXPECT_NE(error_of(doc).find("samples"), std::string::npos);

  doc = fig1_document();
  doc["v0"] = 100.0;
  EXPECT_NE(error_of(doc).find("v0"), std::string::npos);
}

TEST(Config, LoadsTabulatedPathRelativeToConfig) {
  const auto dir = std::filesystem::path(::testing::TempDir()) / "hc_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "table.csv");
    csv << "q_m,U_J\n";
    for (int i = 0; i <= 50; ++i) {
      const double q = 1e-3 * i;
      csv << q << ',' << 1e6 * q * q * q / 3.0 << '\n';
    }
  }
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"potential": {"type": "tabulated", "path": "table.csv"}, "m": 0.05, "v0": 0.5})";
  }
  const auto config = load_config((dir / "run.json").string());
  EXPECT_EQ(config.potential->q_limit(), 0.05);
  {
    std::ofstream cfg(dir / "broken.json");
    cfg << "{not json";
  }
  EXPECT_THROW(load_config((dir / "broken.json").string()), ConfigError);
  EXPECT_THROW(load_config((dir / "absent.json").string()), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(Io, NumberFormats) {
  EXPECT_EQ(format_fixed(4.1165855, 6), "4.116586");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_sci(x)), x);
}

TEST(Io, TrajectoryCsvRoundTrip) {
  Trajectory traj;
  traj.samples = {{0.0, 0.0, 0.99, 0.0245025}, {1e-3, 9.7e-4, 0.98, 0.0245025},
                  {2e-3, 0.0, -0.99, 0.0245025}};
  std::ostringstream out;
  write_trajectory_csv(out, traj, {"{\"m\":0.05}"});
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# {\"m\":0.05}\nt,q,qdot,E\n", 0), 0u);

  const auto path = std::filesystem::path(::testing::TempDir()) / "hc_round_trip.csv";
  write_file_atomic(path.string(), text);
  EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  const auto back = read_trajectory_csv(path.string());
  ASSERT_EQ(back.samples.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.samples[i].t, traj.samples[i].t);
    EXPECT_EQ(back.samples[i].q, traj.samples[i].q);
    EXPECT_EQ(back.samples[i].qdot, traj.samples[i].qdot);
  }
  EXPECT_EQ(back.exit_speed, 0.99);
  std::filesystem::remove(path);
}

TEST(Io, TransformedCsvHeader) {
  TransformedTrajectory traj;
  traj.samples = {{0.0, 0.0, 1.0, 0.5}};
  std::ostringstream out;
  write_transformed_csv(out, traj);
  EXPECT_EQ(out.str().substr(0, 16), "tau,x,x_prime,E_");
}

TEST(Io, RejectsMalformedTrajectory) {
  const auto path = std::filesystem::path(::testing::TempDir()) / "hc_bad.csv";
  write_file_atomic(path.string(), "t,q,qdot,E\n0,0,1\n");
  EXPECT_THROW(read_trajectory_csv(path.string()), ConfigError);
  write_file_atomic(path.string(), "time,q\n");
  EXPECT_THROW(read_trajectory_csv(path.string()), ConfigError);
  std::filesystem::remove(path);
}

TEST(Io, ReportsAsJson) {
  const auto pot = ellipsoid();
  const auto report = to_json(stability_report(*pot, kMass, 0.99));
  EXPECT_EQ(report.at("regime"), "Stiffening");
  EXPECT_TRUE(report.at("dt_safe").is_number());
  const auto degenerate = to_json(stability_report(*power_law(1.0, 0.5), 1.0, 1.0));
  EXPECT_TRUE(degenerate.at("grad_sup").is_null());
  const auto aa = to_json(action_angle_report(*pot, kMass, 0.0245025));
  for (const char* key : {"E", "q_max", "J", "dJ_dE", "T"}) EXPECT_TRUE(aa.contains(key)) << key;
}
