#include "hc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <sstream>

#include "hc/actionangle.hpp"
#include "hc/dynamics.hpp"
#include "hc/errors.hpp"
#include "hc/io.hpp"
#include "hc/stability.hpp"

namespace hc {

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
    case CheckStatus::Info: return "info";
  }
  return "unknown";
}

bool VerificationReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const auto& c) { return c.status == CheckStatus::Fail; });
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& c : checks) {
    list.push_back({{"name", c.name},
                    {"measured", std::isfinite(c.measured) ? nlohmann::json(c.measured)
                                                           : nlohmann::json(nullptr)},
                    {"tolerance", c.tolerance},
                    {"comparison", c.comparison},
                    {"status", to_string(c.status)},
                    {"detail", c.detail}});
  }
  return {{"checks", list}, {"passed", passed()}};
}

std::string VerificationReport::summary() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    std::string tag = to_string(c.status);
    std::transform(tag.begin(), tag.end(), tag.begin(), ::toupper);
    out << tag << "  " << c.name;
    if (c.status != CheckStatus::Skipped) {
      out << "  measured=" << format_sci(c.measured) << ' ' << c.comparison << ' '
          << format_sci(c.tolerance);
    }
    if (!c.detail.empty()) out << "  (" << c.detail << ')';
    out << '\n';
  }
  out << (passed() ? "all checks passed" : "verification FAILED") << '\n';
  return out.str();
}

namespace {

VerificationCheck at_most(std::string name, double measured, double tolerance,
                          std::string detail = {}) {
  const bool ok = std::isfinite(measured) && measured <= tolerance;
  return {std::move(name), measured, tolerance, "<=", ok ? CheckStatus::Pass : CheckStatus::Fail,
          std::move(detail)};
}

VerificationCheck skipped(std::string name, std::string why) {
  return {std::move(name), 0.0, 0.0, "", CheckStatus::Skipped, std::move(why)};
}

// Max deviation of transformed samples from the exact solution, scaled by
// the initial amplitude of x and x'.
double deviation_from_exact(const TransformedTrajectory& traj, const DampedHarmonic& exact) {
  const auto start = exact.state(0.0);
  const double x_scale = exact.amplitude();
  const double v_scale = std::abs(start.x_prime);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const auto e = exact.state(s.tau);
    worst = std::max({worst, std::abs(s.x - e.x) / x_scale, std::abs(s.x_prime - e.x_prime) / v_scale});
  }
  return worst;
}

struct SpeedResult {
  double v0 = 0.0;
  double turning_residual = 0.0;
  double reference_drift = 0.0;
  double harmonic_drift = 0.0;
  double ellipse_residual = 0.0;
  double duration_error = 0.0;
  std::optional<double> shortcut_error;
  double km_invariance = 0.0;
  bool degenerate = false;
  bool verlet_completed = false;
  double verlet_drift = 0.0;
  std::string verlet_reason;
  // damped runs, one entry per variant (conservative variants skipped)
  std::vector<double> restitution;
  std::vector<double> c_star_error;
  std::vector<double> c_star_variation;
  std::vector<double> spiral_match;
  std::vector<double> spiral_linearity;
};

SpeedResult evaluate_speed(const ScenarioConfig& config, double v0, const VerifyOptions& options) {
  const auto& pot = *config.potential;
  const double m = config.mass;
  const double energy = 0.5 * m * v0 * v0;
  SpeedResult r;
  r.v0 = v0;

  const double q_max = turning_point(pot, energy);
  r.turning_residual = std::abs(pot.energy(q_max) - energy) / energy;

  const ImpactScenario conservative(m, config.potential, v0, config.refs);
  ReferenceOptions nodes{options.rtol, options.atol, 0, 10.0};
  const Trajectory node_run = simulate_reference(conservative, nodes);
  for (const auto& s : node_run.samples) {
    r.reference_drift = std::max(r.reference_drift, std::abs(s.energy - energy) / energy);
  }

  ReferenceOptions sampled{options.rtol, options.atol, config.samples, 10.0};
  const Trajectory run = simulate_reference(conservative, sampled);
  const auto transformed = transform_trajectory(pot, config.refs, m, run);
  for (const auto& s : transformed.samples) {
    r.harmonic_drift = std::max(r.harmonic_drift, std::abs(s.energy - energy) / energy);
  }
  r.ellipse_residual = deviation_from_exact(transformed, DampedHarmonic(config.refs, 0.0, energy));
  const double period = contact_duration(pot, m, energy);
  r.duration_error = std::abs(run.duration - period) / run.duration;

  const StabilityReport report = stability_report(pot, m, v0, config.refs);
  r.degenerate = report.regime == Regime::Degenerate;
  if (!r.degenerate) {
    const StabilityReport other = stability_report(pot, m, v0, ReferenceConstants(7.0, 3.0));
    r.km_invariance = std::abs(other.dt_safe - report.dt_safe) / report.dt_safe;
    if (report.regime == Regime::Stiffening) {
      r.shortcut_error =
          std::abs(dt_safe_stiffening(m, v0, report.force_at_qmax) - report.dt_safe) / report.dt_safe;
    }
    VerletLimits limits;
    limits.max_energy_drift = std::numeric_limits<double>::infinity();
    const VerletRun verlet = verify_bound(config.potential, m, v0, 0.999 * report.dt_safe, limits);
    r.verlet_completed = verlet.stable;
    r.verlet_drift = verlet.peak_energy_drift;
    r.verlet_reason = verlet.reason;
  }

  for (const auto& variant : config.damping_variants()) {
    if (!variant.law) continue;
    const ImpactScenario damped(m, config.potential, v0, config.refs, variant.law);
    const Trajectory damped_run = simulate_reference(damped, sampled);
    const auto damped_tx = transform_trajectory(pot, config.refs, m, damped_run);

    double worst = 0.0, lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& s : damped_run.samples) {
      if (!(s.q > 0.0)) continue;
      const double c_star = transformed_damping(pot, config.refs, m, s.q, (*variant.law)(s.q));
      lo = std::min(lo, c_star);
      hi = std::max(hi, c_star);
      if (variant.law->is_universal()) worst = std::max(worst, std::abs(c_star - variant.c0) / variant.c0);
    }
    r.c_star_error.push_back(variant.law->is_universal() ? worst
                                                         : std::numeric_limits<double>::quiet_NaN());
    r.c_star_variation.push_back((hi - lo) / (0.5 * (hi + lo)));

    if (variant.law->is_universal()) {
      r.restitution.push_back(damped_run.exit_speed / v0);
      const DampedHarmonic exact(config.refs, variant.c0, energy);
      r.spiral_match.push_back(deviation_from_exact(damped_tx, exact));
      // log r must follow log(r0) - sigma tau
      const double log_r0 = std::log(exact.spiral_radius(0.0, exact.state(0.0).x_prime));
      double linearity = 0.0;
      for (const auto& s : damped_tx.samples) {
        const double predicted = log_r0 - exact.decay_rate() * s.tau;
        linearity = std::max(linearity, std::abs(std::log(exact.spiral_radius(s.x, s.x_prime)) - predicted));
      }
      r.spiral_linearity.push_back(linearity);
    }
  }
  return r;
}

}  // namespace

VerificationReport run_verification(const ScenarioConfig& config, const VerifyOptions& options) {
  std::vector<std::future<SpeedResult>> jobs;
  for (const double v0 : config.speeds) {
    jobs.push_back(std::async(std::launch::async, evaluate_speed, std::cref(config), v0, options));
  }
  std::vector<SpeedResult> results;
  for (auto& job : jobs) results.push_back(job.get());

  auto worst = [&](auto getter) {
    double w = 0.0;
    for (const auto& r : results) w = std::max(w, getter(r));
    return w;
  };

  VerificationReport report;
  auto& checks = report.checks;
  checks.push_back(at_most("turning_point_residual", worst([](const auto& r) { return r.turning_residual; }), 1e-12));
  checks.push_back(at_most("reference_energy_drift", worst([](const auto& r) { return r.reference_drift; }), 1e-11));
  checks.push_back(at_most("harmonic_energy_conservation", worst([](const auto& r) { return r.harmonic_drift; }), 1e-9));
  checks.push_back(at_most("harmonic_ellipse_residual", worst([](const auto& r) { return r.ellipse_residual; }), 1e-6));
  checks.push_back(at_most("duration_consistency", worst([](const auto& r) { return r.duration_error; }), 1e-6));

  {
    // J(E) over 20 log-spaced energies spanning two decades below the largest impact energy
    const double e_top = 0.5 * config.mass * std::pow(*std::max_element(config.speeds.begin(), config.speeds.end()), 2);
    double previous = 0.0;
    double min_gap = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const double energy = e_top * std::pow(10.0, -2.0 + 2.0 * i / 19.0);
      const double j = action(*config.potential, config.mass, energy);
      if (i > 0) min_gap = std::min(min_gap, (j - previous) / j);
      previous = j;
    }
    checks.push_back({"action_strictly_increasing", min_gap, 0.0, ">",
                      min_gap > 0.0 ? CheckStatus::Pass : CheckStatus::Fail, "min relative increment"});
  }

  const bool any_degenerate = std::any_of(results.begin(), results.end(), [](const auto& r) { return r.degenerate; });
  if (any_degenerate) {
    checks.push_back(skipped("dt_safe_km_invariance", "degenerate bound"));
    checks.push_back(skipped("stiffening_shortcut_equivalence", "degenerate bound"));
    checks.push_back(skipped("bound_verlet_completes", "degenerate bound"));
  } else {
    checks.push_back(at_most("dt_safe_km_invariance", worst([](const auto& r) { return r.km_invariance; }), 1e-12));
    const bool all_stiff = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.shortcut_error.has_value(); });
    if (all_stiff) {
      checks.push_back(at_most("stiffening_shortcut_equivalence",
                               worst([](const auto& r) { return *r.shortcut_error; }), 1e-9));
    } else {
      checks.push_back(skipped("stiffening_shortcut_equivalence", "contact not stiffening at every speed"));
    }
    const bool completed = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.verlet_completed; });
    std::string reason;
    for (const auto& r : results) {
      if (!r.verlet_completed) reason = r.verlet_reason;
    }
    checks.push_back({"bound_verlet_completes", completed ? 1.0 : 0.0, 1.0, "==",
                      completed ? CheckStatus::Pass : CheckStatus::Fail,
                      completed ? "Verlet at 0.999 dt_safe exits with q <= 2 q_max" : reason});
    checks.push_back({"bound_verlet_energy_drift", worst([](const auto& r) { return r.verlet_drift; }), 0.05, "<=",
                      CheckStatus::Info, "peak drift at 0.999 dt_safe; informational"});
  }
  {
    const ReferenceConstants& refs = config.refs;
    const double limit = 2.0 / refs.omega0();
    const bool below = verlet_harmonic(refs, 0.999 * limit).stable;
    const bool above = verlet_harmonic(refs, 1.001 * limit).stable;
    checks.push_back({"harmonic_space_verlet_threshold", below && !above ? 1.0 : 0.0, 1.0, "==",
                      below && !above ? CheckStatus::Pass : CheckStatus::Fail,
                      "stable at 0.999*2/Omega0, unstable at 1.001*2/Omega0"});
  }

  const bool universal = config.damping && config.damping->law == DampingConfig::Law::Universal &&
                         std::any_of(config.damping->c0_values.begin(), config.damping->c0_values.end(),
                                     [](double c) { return c > 0.0; });
  const bool constant = config.damping && config.damping->law == DampingConfig::Law::Constant;

  if (universal) {
    double c_err = 0.0, match = 0.0, linearity = 0.0, e_err = 0.0, spread = 0.0;
    std::size_t index = 0;
    for (const double c0 : config.damping->c0_values) {
      if (c0 == 0.0) continue;
      const double predicted = predicted_restitution(DampingSpec(c0, config.refs, config.mass));
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& r : results) {
        c_err = std::max(c_err, r.c_star_error[index]);
        match = std::max(match, r.spiral_match[index]);
        linearity = std::max(linearity, r.spiral_linearity[index]);
        e_err = std::max(e_err, std::abs(r.restitution[index] - predicted));
        lo = std::min(lo, r.restitution[index]);
        hi = std::max(hi, r.restitution[index]);
      }
      spread = std::max(spread, hi - lo);
      ++index;
    }
    checks.push_back(at_most("transformed_damping_constancy", c_err, 1e-9));
    checks.push_back(at_most("damped_spiral_match", match, 1e-6));
    checks.push_back(at_most("log_spiral_linearity", linearity, 1e-6));
    checks.push_back(at_most("restitution_match", e_err, 1e-5));
    if (results.size() > 1) checks.push_back(at_most("restitution_spread", spread, 1e-6));
    else checks.push_back(skipped("restitution_spread", "single impact speed"));
  } else {
    for (const char* name : {"transformed_damping_constancy", "damped_spiral_match", "log_spiral_linearity",
                             "restitution_match", "restitution_spread"}) {
      checks.push_back(skipped(name, "no universal damping configured"));
    }
  }

  if (constant) {
    double variation = std::numeric_limits<double>::infinity();
    for (const auto& r : results) variation = std::min(variation, r.c_star_variation[0]);
    checks.push_back({"converse_nonconstant_C_star", variation, 0.1, ">",
                      variation > 0.1 ? CheckStatus::Pass : CheckStatus::Fail,
                      "constant physical damping must not map to constant C_*"});
  } else {
    checks.push_back(skipped("converse_nonconstant_C_star", "no constant damping configured"));
  }
  return report;
}

}  // namespace hc
