#include "hc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hc/errors.hpp"

namespace hc {

namespace {

constexpr double kRegimeTolerance = 1e-12;
constexpr std::size_t kGridHalf = 5000;

// log-spaced on [1e-8 q_max, q_max] merged with linear spacing on (0, q_max]
std::vector<double> composite_grid(double q_max) {
  std::vector<double> grid;
  grid.reserve(2 * kGridHalf);
  const double log_lo = std::log(1e-8);
  for (std::size_t i = 0; i < kGridHalf; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(kGridHalf - 1);
    grid.push_back(q_max * std::exp(log_lo * (1.0 - frac)));
  }
  for (std::size_t i = 1; i <= kGridHalf; ++i) {
    grid.push_back(q_max * static_cast<double>(i) / static_cast<double>(kGridHalf));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.back() = q_max;
  return grid;
}

void check_q_max(const ContactPotential& pot, double q_max) {
  if (!(q_max > 0.0) || q_max > pot.q_limit()) {
    throw DomainError("q_max must lie in (0, q_limit]");
  }
}

}  // namespace

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Stiffening: return "Stiffening";
    case Regime::SofteningOrLinear: return "SofteningOrLinear";
    case Regime::Mixed: return "Mixed";
    case Regime::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

Regime classify_regime(const ContactPotential& pot, double q_max) {
  check_q_max(pot, q_max);
  if (!std::isfinite(gradient_limit_at_zero(pot, q_max))) return Regime::Degenerate;

  bool all_nonpositive = true;
  bool all_nonnegative = true;
  for (const double q : composite_grid(q_max)) {
    const double u = pot.energy(q);
    const double f = pot.force(q);
    const double two_u_k = 2.0 * u * pot.stiffness(q);
    const double margin = two_u_k - f * f;
    const double tol = kRegimeTolerance * std::max(std::abs(two_u_k), f * f);
    if (margin > tol) all_nonpositive = false;
    if (margin < -tol) all_nonnegative = false;
  }
  if (all_nonpositive) return Regime::SofteningOrLinear;
  if (all_nonnegative) return Regime::Stiffening;
  return Regime::Mixed;
}

GradientSupremum gradient_supremum(const ContactPotential& pot, double q_max, Regime regime) {
  check_q_max(pot, q_max);
  switch (regime) {
    case Regime::Degenerate:
      return {std::numeric_limits<double>::infinity(), 0.0};
    case Regime::Stiffening:
      return {gradient_ratio(pot, q_max), q_max};
    case Regime::SofteningOrLinear:
      return {gradient_limit_at_zero(pot, q_max), 0.0};
    case Regime::Mixed:
      break;
  }

  const auto grid = composite_grid(q_max);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double g = gradient_ratio(pot, grid[i]);
    if (g > best_value) {
      best_value = g;
      best = i;
    }
  }
  double lo = best == 0 ? 0.5 * grid[0] : grid[best - 1];
  double hi = best + 1 == grid.size() ? grid[best] : grid[best + 1];
  // golden-section refinement inside the bracketing grid cells
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = gradient_ratio(pot, x1);
  double f2 = gradient_ratio(pot, x2);
  for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = gradient_ratio(pot, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = gradient_ratio(pot, x1);
    }
  }
  GradientSupremum sup{best_value, grid[best]};
  if (f1 > sup.value) sup = {f1, x1};
  if (f2 > sup.value) sup = {f2, x2};
  const double at_contact = gradient_limit_at_zero(pot, q_max);
  if (at_contact > sup.value) sup = {at_contact, 0.0};
  return sup;
}

double dt_safe_general(const ContactPotential& pot, double mass, double q_max,
                       const ReferenceConstants& refs) {
  if (!(mass > 0.0)) throw DomainError("mass must be > 0");
  const Regime regime = classify_regime(pot, q_max);
  const GradientSupremum sup = gradient_supremum(pot, q_max, regime);
  if (regime == Regime::Degenerate || !std::isfinite(sup.value)) {
    throw DegenerateBound("transformation gradient diverges at contact; no positive timestep bound");
  }
  const double dtau_crit = 2.0 / refs.omega0();
  const double max_rate = std::sqrt(refs.M() / (mass * refs.K())) * sup.value;
  return dtau_crit / max_rate;
}

double dt_safe_stiffening(double mass, double v0, double force_at_qmax) {
  if (!(mass > 0.0) || !(v0 > 0.0) || !(force_at_qmax > 0.0)) {
    throw DomainError("dt_safe_stiffening: mass, v0 and force must be > 0");
  }
  return 2.0 * mass * v0 / force_at_qmax;
}

double dt_safe_stiffening(const ContactPotential& pot, double mass, double v0) {
  if (!(v0 > 0.0)) throw DomainError("v0 must be > 0");
  const double q_max = turning_point(pot, 0.5 * mass * v0 * v0);
  const Regime regime = classify_regime(pot, q_max);
  if (regime != Regime::Stiffening) {
    throw RegimeMismatch("stiffening shortcut requested for a " + to_string(regime) + " contact");
  }
  return dt_safe_stiffening(mass, v0, pot.force(q_max));
}

StabilityReport stability_report(const ContactPotential& pot, double mass, double v0,
                                 const ReferenceConstants& refs) {
  if (!(mass > 0.0) || !(v0 > 0.0)) throw DomainError("mass and v0 must be > 0");
  const double q_max = turning_point(pot, 0.5 * mass * v0 * v0);
  const Regime regime = classify_regime(pot, q_max);
  const GradientSupremum sup = gradient_supremum(pot, q_max, regime);
  StabilityReport report{regime, q_max, pot.force(q_max), sup.value, sup.argmax, 0.0};
  if (regime != Regime::Degenerate && std::isfinite(sup.value)) {
    report.dt_safe = (2.0 / refs.omega0()) / (std::sqrt(refs.M() / (mass * refs.K())) * sup.value);
  }
  return report;
}

VerletRun verify_bound(const PotentialPtr& pot, double mass, double v0, double dt,
                       const VerletLimits& limits) {
  const ImpactScenario scenario(mass, pot, v0, ReferenceConstants(1.0, 1.0));
  return simulate_verlet(scenario, dt, limits);
}

}  // namespace hc
