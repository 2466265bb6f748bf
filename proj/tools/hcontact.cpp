// hcontact: command-line front end for the harmonic contact toolkit.
//
// Exit codes: 0 ok, 1 configuration or domain error, 2 numerical failure,
// 3 verification failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hc/actionangle.hpp"
#include "hc/config.hpp"
#include "hc/damping.hpp"
#include "hc/dynamics.hpp"
#include "hc/errors.hpp"
#include "hc/io.hpp"
#include "hc/regularize.hpp"
#include "hc/stability.hpp"
#include "hc/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerify = 3;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  double rtol = 1e-13;
  double atol = 1e-13;
  long long seed = 0;  // reserved; every computation is deterministic
};

struct ProfileOptions {
  std::optional<double> q_min;
  std::optional<double> q_max;
  std::size_t n = 200;
  std::string spacing = "log";
};

void add_common(CLI::App& cmd, CommonOptions& options) {
  cmd.add_option("--config", options.config_path, "Scenario JSON file")->required();
  cmd.add_option("--out-dir", options.out_dir, "Output directory (overrides the config's out_dir)");
  cmd.add_option("--rtol", options.rtol, "Relative tolerance of the reference integrator")
      ->capture_default_str();
  cmd.add_option("--atol", options.atol, "Absolute tolerance of the reference integrator")
      ->capture_default_str();
  cmd.add_option("--seed", options.seed, "Reserved; all computation is deterministic");
}

fs::path output_dir(const CommonOptions& options, const hc::ScenarioConfig& config) {
  if (!options.out_dir.empty()) return options.out_dir;
  if (!config.out_dir.empty()) return config.out_dir;
  return "out";
}

hc::ReferenceOptions reference_options(const CommonOptions& options, std::size_t samples) {
  hc::ReferenceOptions out;
  out.rtol = options.rtol;
  out.atol = options.atol;
  out.samples = samples;
  return out;
}

std::vector<std::string> header_comments(const hc::ScenarioConfig& config,
                                          const std::string& run) {
  return {config.source.dump(), run};
}

std::string speed_tag(double v0) { return "v" + hc::format_fixed(v0, 4); }

int cmd_simulate(const CommonOptions& options) {
  const auto config = hc::load_config(options.config_path);
  const fs::path dir = output_dir(options, config);

  struct Run {
    std::string label;
    double v0;
    hc::Trajectory physical;
    hc::TransformedTrajectory transformed;
  };
  std::vector<std::future<Run>> pending;
  for (const auto& variant : config.damping_variants()) {
    for (double v0 : config.speeds) {
      pending.push_back(std::async(std::launch::async, [&config, &options, variant, v0] {
        const hc::ImpactScenario scenario(config.mass, config.potential, v0, config.refs,
                                          variant.law);
        Run run{variant.label, v0, {}, {}};
        run.physical =
            hc::simulate_reference(scenario, reference_options(options, config.samples));
        run.transformed =
            hc::transform_trajectory(*config.potential, config.refs, config.mass, run.physical);
        return run;
      }));
    }
  }
  std::vector<Run> runs;
  for (auto& future : pending) runs.push_back(future.get());

  for (const auto& run : runs) {
    const std::string stem = run.label + "_" + speed_tag(run.v0);
    const json info = {{"damping", run.label}, {"v0", run.v0}};
    std::ostringstream physical, transformed;
    hc::write_trajectory_csv(physical, run.physical, header_comments(config, info.dump()));
    hc::write_transformed_csv(transformed, run.transformed, header_comments(config, info.dump()));
    hc::write_file_atomic((dir / (stem + "_physical.csv")).string(), physical.str());
    hc::write_file_atomic((dir / (stem + "_transformed.csv")).string(), transformed.str());
  }
  std::cout << "damping,v0,duration_s,exit_speed,restitution\n";
  for (const auto& run : runs) {
    std::cout << run.label << ',' << hc::format_fixed(run.v0, 4) << ','
              << hc::format_sci(run.physical.duration) << ','
              << hc::format_sci(run.physical.exit_speed) << ','
              << hc::format_sci(run.physical.exit_speed / run.v0) << '\n';
  }
  std::cerr << "wrote " << 2 * runs.size() << " files to " << dir.string() << '\n';
  return kExitOk;
}

int cmd_transform(const CommonOptions& options, const std::string& input,
                  const std::string& output) {
  const auto config = hc::load_config(options.config_path);
  const auto physical = hc::read_trajectory_csv(input);
  const auto transformed =
      hc::transform_trajectory(*config.potential, config.refs, config.mass, physical);
  std::ostringstream out;
  hc::write_transformed_csv(out, transformed,
                            header_comments(config, json{{"input", input}}.dump()));
  const fs::path target =
      output.empty() ? output_dir(options, config) / (fs::path(input).stem().string() + "_transformed.csv")
                     : fs::path(output);
  hc::write_file_atomic(target.string(), out.str());
  std::cerr << "wrote " << target.string() << '\n';
  return kExitOk;
}

int cmd_bound(const CommonOptions& options) {
  const auto config = hc::load_config(options.config_path);
  std::vector<std::future<hc::StabilityReport>> pending;
  for (double v0 : config.speeds) {
    pending.push_back(std::async(std::launch::async, [&config, v0] {
      return hc::stability_report(*config.potential, config.mass, v0, config.refs);
    }));
  }
  json reports = json::array();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    json report = hc::to_json(pending[i].get());
    report["v0"] = config.speeds[i];
    reports.push_back(report);
  }
  const std::string text = reports.dump(2) + "\n";
  hc::write_file_atomic((output_dir(options, config) / "bound.json").string(), text);
  std::cout << text;
  return kExitOk;
}

int cmd_table1(const CommonOptions& options) {
  const auto config = hc::load_config(options.config_path);
  struct Row {
    double v0, q_max, force, dt_safe;
  };
  std::vector<std::future<Row>> pending;
  for (double v0 : config.speeds) {
    pending.push_back(std::async(std::launch::async, [&config, v0] {
      const auto& pot = *config.potential;
      const double q_max = hc::turning_point(pot, 0.5 * config.mass * v0 * v0);
      return Row{v0, q_max, pot.force(q_max), hc::dt_safe_general(pot, config.mass, q_max)};
    }));
  }
  std::string text = "v0,delta_max_mm,force_N,dt_safe_ms\n";
  for (auto& future : pending) {
    const Row row = future.get();
    text += hc::format_fixed(row.v0, 6) + ',' + hc::format_fixed(1e3 * row.q_max, 6) + ',' +
            hc::format_fixed(row.force, 6) + ',' + hc::format_fixed(1e3 * row.dt_safe, 6) + '\n';
  }
  hc::write_file_atomic((output_dir(options, config) / "table1.csv").string(), text);
  std::cout << text;
  return kExitOk;
}

int cmd_action(const CommonOptions& options) {
  const auto config = hc::load_config(options.config_path);
  std::vector<std::future<hc::ActionAngleReport>> pending;
  for (double v0 : config.speeds) {
    pending.push_back(std::async(std::launch::async, [&config, v0] {
      return hc::action_angle_report(*config.potential, config.mass, 0.5 * config.mass * v0 * v0);
    }));
  }
  json reports = json::array();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    json report = hc::to_json(pending[i].get());
    report["v0"] = config.speeds[i];
    reports.push_back(report);
  }
  const std::string text = reports.dump(2) + "\n";
  hc::write_file_atomic((output_dir(options, config) / "action.json").string(), text);
  std::cout << text;
  return kExitOk;
}

int cmd_damping_profile(const CommonOptions& options, const ProfileOptions& profile) {
  const auto config = hc::load_config(options.config_path);
  if (!config.damping) throw hc::ConfigError("damping: missing (required by damping-profile)");
  const double top_speed = *std::max_element(config.speeds.begin(), config.speeds.end());
  const double q_peak = hc::turning_point(*config.potential, 0.5 * config.mass * top_speed * top_speed);
  const double q_max = profile.q_max.value_or(q_peak);
  const double q_min = profile.q_min.value_or(1e-6 * q_max);
  if (!(q_min > 0.0) || !(q_max > q_min)) throw hc::ConfigError("--q-min/--q-max: need 0 < q-min < q-max");
  if (q_max > config.potential->q_limit()) throw hc::ConfigError("--q-max: beyond the potential's domain");
  if (profile.n < 2) throw hc::ConfigError("--n: need at least 2 points");
  const bool logarithmic = profile.spacing == "log";

  const fs::path dir = output_dir(options, config);
  for (const auto& variant : config.damping_variants()) {
    if (!variant.law) continue;
    std::string text = "# " + config.source.dump() + "\n# " +
                       json{{"damping", variant.label}}.dump() + "\nq,C\n";
    for (std::size_t i = 0; i < profile.n; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(profile.n - 1);
      const double q = logarithmic ? q_min * std::pow(q_max / q_min, f) : q_min + f * (q_max - q_min);
      text += hc::format_sci(q) + ',' + hc::format_sci((*variant.law)(q)) + '\n';
    }
    const fs::path target = dir / ("damping_profile_" + variant.label + ".csv");
    hc::write_file_atomic(target.string(), text);
    std::cerr << "wrote " << target.string() << '\n';
  }
  return kExitOk;
}

int cmd_verify(const CommonOptions& options) {
  const auto config = hc::load_config(options.config_path);
  hc::VerifyOptions verify_options;
  verify_options.rtol = options.rtol;
  verify_options.atol = options.atol;
  const auto report = hc::run_verification(config, verify_options);
  hc::write_file_atomic((output_dir(options, config) / "verify_report.json").string(),
                        report.to_json().dump(2) + "\n");
  std::cout << report.summary();
  return report.passed() ? kExitOk : kExitVerify;
}

int run_guarded(const std::function<int()>& command) {
  try {
    return command();
  } catch (const hc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hc::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hc::InvalidPotential& e) {
    std::cerr << "invalid potential: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hc::EnergyOutOfRange& e) {
    std::cerr << "energy out of range: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hc::RangeError& e) {
    std::cerr << "range error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hc::DegenerateBound& e) {
    std::cerr << "DegenerateBound: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const hc::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic regularisation of one-dimensional contact impacts"};
  app.require_subcommand(1);

  CommonOptions options;
  std::string input, output;
  ProfileOptions profile;

  auto* simulate = app.add_subcommand("simulate", "Reference trajectories, physical and transformed");
  add_common(*simulate, options);
  auto* transform = app.add_subcommand("transform", "Map a physical trajectory CSV to (tau, x, x')");
  add_common(*transform, options);
  transform->add_option("--input", input, "Physical trajectory CSV (t,q,qdot,E)")->required();
  transform->add_option("--output", output, "Transformed CSV path");
  auto* bound = app.add_subcommand("bound", "Stability report with the safe time step");
  add_common(*bound, options);
  auto* table1 = app.add_subcommand("table1", "Peak penetration, force and safe time step per speed");
  add_common(*table1, options);
  auto* action = app.add_subcommand("action", "Action, dJ/dE and contact duration per speed");
  add_common(*action, options);
  auto* damping_profile = app.add_subcommand("damping-profile", "Universal damping law C(q) on a grid");
  add_common(*damping_profile, options);
  damping_profile->add_option("--q-min", profile.q_min, "Smallest penetration (m)");
  damping_profile->add_option("--q-max", profile.q_max, "Largest penetration (m)");
  damping_profile->add_option("--n", profile.n, "Number of grid points")->capture_default_str();
  damping_profile->add_option("--spacing", profile.spacing, "Grid spacing")
      ->check(CLI::IsMember({"log", "linear"}))
      ->capture_default_str();
  auto* verify = app.add_subcommand("verify", "Run every property check on the scenario");
  add_common(*verify, options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (simulate->parsed()) return run_guarded([&] { return cmd_simulate(options); });
  if (transform->parsed()) return run_guarded([&] { return cmd_transform(options, input, output); });
  if (bound->parsed()) return run_guarded([&] { return cmd_bound(options); });
  if (table1->parsed()) return run_guarded([&] { return cmd_table1(options); });
  if (action->parsed()) return run_guarded([&] { return cmd_action(options); });
  if (damping_profile->parsed()) {
    return run_guarded([&] { return cmd_damping_profile(options, profile); });
  }
  if (verify->parsed()) return run_guarded([&] { return cmd_verify(options); });
  return kExitConfig;
}
