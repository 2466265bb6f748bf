#include "hc/dynamics.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "hc/actionangle.hpp"
#include "hc/dopri5.hpp"
#include "hc/errors.hpp"

namespace hc {

ImpactScenario::ImpactScenario(double m, PotentialPtr pot, double speed, ReferenceConstants r,
                               std::optional<DampingLaw> law)
    : mass(m), potential(std::move(pot)), v0(speed), refs(r), damping(std::move(law)) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("mass must be positive");
  if (!(v0 > 0.0) || !std::isfinite(v0)) throw DomainError("impact speed v0 must be positive");
  if (!potential) throw DomainError("scenario needs a potential");
}

namespace {

using State = Eigen::Vector2d;
using Solver = DormandPrince5<State>;

// Bisection for a sign change of component `index` minus `level` on the
// step's dense output; the returned time has the same sign as at the step
// start.
double bisect_dense(const Solver::Step& step, int index, double tolerance, double level = 0.0) {
  double lo = step.t0;
  double hi = step.t0 + step.h;
  const bool positive_at_lo = step.y0[index] > level;
  for (int it = 0; it < 200; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double value = step.dense(mid)[index] - level;
    if ((value > 0.0) == positive_at_lo) lo = mid;
    else hi = mid;
    if (std::abs(value) <= tolerance) return mid;
  }
  return lo;
}

// First breakpoint strictly crossed by the step, in the direction of travel.
// Knots within roundoff of either end point do not count.
std::optional<double> crossed_breakpoint(const std::vector<double>& knots, const Solver::Step& step) {
  const double a = step.y0[0];
  const double b = step.y1[0];
  auto inside = [&](double knot) {
    const double margin = 1e-12 * knot;
    return knot > std::min(a, b) + margin && knot < std::max(a, b) - margin;
  };
  auto first = std::upper_bound(knots.begin(), knots.end(), std::min(a, b));
  auto last = std::lower_bound(knots.begin(), knots.end(), std::max(a, b));
  if (b >= a) {
    for (auto it = first; it != last; ++it) {
      if (inside(*it)) return *it;
    }
  } else {
    for (auto it = last; it != first; --it) {
      if (inside(*std::prev(it))) return *std::prev(it);
    }
  }
  return std::nullopt;
}

}  // namespace

Trajectory simulate_reference(const ImpactScenario& scenario, const ReferenceOptions& options) {
  if (!(options.rtol >= 1e-14) || !(options.atol >= 1e-14)) {
    throw DomainError("simulate_reference: rtol and atol must be >= 1e-14");
  }
  const ContactPotential& pot = *scenario.potential;
  const double m = scenario.mass;
  const double limit = pot.q_limit();
  const std::optional<DampingLaw>& damping = scenario.damping;

  auto rhs = [&](double, const State& y) -> State {
    const double q = y[0];
    const double depth = std::abs(q);
    if (depth > limit) throw DomainError("penetration left the potential's domain");
    const double f = pot.force(depth);
    const double c = damping ? (*damping)(depth) : 0.0;
    return State(y[1], -((q < 0.0 ? -f : f) + c * y[1]) / m);
  };

  const double energy = scenario.energy();
  const double duration_estimate = contact_duration(pot, m, energy);
  const double t_max = options.max_time_factor * duration_estimate;

  Solver::Options solver_options;
  solver_options.rtol = options.rtol;
  solver_options.atol = options.atol;
  solver_options.max_step = duration_estimate / 20.0;
  solver_options.initial_step = duration_estimate * 1e-4;
  Solver solver(rhs, 0.0, State(0.0, scenario.v0), solver_options);

  const std::vector<double> knots = pot.breakpoints();
  std::vector<Solver::Step> steps;
  std::optional<double> peak;
  for (;;) {
    auto next = solver.advance();
    if (const auto knot = crossed_breakpoint(knots, next)) {
      const double t_knot = bisect_dense(next, 0, 0.0, *knot);
      if (t_knot > next.t0) {
        solver.rewind(next);
        next = solver.advance(t_knot);
      }
    }
    steps.push_back(next);
    const auto& step = steps.back();
    if (!peak && step.y0[1] > 0.0 && step.y1[1] <= 0.0) {
      const double t_peak = bisect_dense(step, 1, 0.0);
      peak = solver.single_step(step.t0, step.y0, t_peak - step.t0)[0];
    }
    if (step.y1[0] <= 0.0) break;
    if (solver.t() > t_max) {
      throw NoExitDetected("no exit crossing within " + std::to_string(options.max_time_factor) +
                           " conservative contact durations");
    }
  }

  // Exit: dense-output bisection, then Newton on the real step map.
  const auto& last = steps.back();
  double t_exit = bisect_dense(last, 0, 1e-15);
  State y_exit = solver.single_step(last.t0, last.y0, t_exit - last.t0);
  for (int it = 0; it < 4; ++it) {
    const double correction = -y_exit[0] / y_exit[1];
    if (!std::isfinite(correction)) break;
    t_exit += correction;
    y_exit = solver.single_step(last.t0, last.y0, t_exit - last.t0);
    if (std::abs(correction) <= 1e-16 * t_exit) break;
  }

  auto make_sample = [&](double t, double q, double qdot) {
    const double depth = std::max(q, 0.0);
    return PhysicalSample{t, depth, qdot, 0.5 * m * qdot * qdot + pot.energy(depth)};
  };

  Trajectory out;
  out.duration = t_exit;
  out.exit_speed = std::abs(y_exit[1]);
  out.peak_penetration = peak.value_or(0.0);

  if (options.samples == 0) {
    out.samples.reserve(steps.size() + 1);
    out.samples.push_back(make_sample(0.0, 0.0, scenario.v0));
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      out.samples.push_back(make_sample(steps[i].t0 + steps[i].h, steps[i].y1[0], steps[i].y1[1]));
    }
  } else {
    const std::size_t n = std::max<std::size_t>(options.samples, 3);
    out.samples.reserve(n);
    out.samples.push_back(make_sample(0.0, 0.0, scenario.v0));
    std::size_t cursor = 0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double t = t_exit * static_cast<double>(k) / static_cast<double>(n - 1);
      while (cursor + 1 < steps.size() && steps[cursor + 1].t0 <= t) ++cursor;
      const auto& step = steps[cursor];
      const State y = t == step.t0 ? step.y0 : solver.single_step(step.t0, step.y0, t - step.t0);
      out.samples.push_back(make_sample(t, y[0], y[1]));
    }
  }
  out.samples.push_back(make_sample(t_exit, 0.0, y_exit[1]));
  return out;
}

VerletRun simulate_verlet(const ImpactScenario& scenario, double dt, const VerletLimits& limits) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("simulate_verlet: dt must be > 0");
  const ContactPotential& pot = *scenario.potential;
  const double m = scenario.mass;
  const double e0 = scenario.energy();
  const double q_max = scenario.q_max();
  const double limit = pot.q_limit();
  const double duration_estimate = contact_duration(pot, m, e0);
  const auto max_steps =
      static_cast<std::size_t>(limits.max_time_factor * duration_estimate / dt) + 10;

  auto acceleration = [&](double q, double v) {
    if (q <= 0.0) return 0.0;
    const double c = scenario.damping ? (*scenario.damping)(q) : 0.0;
    return -(pot.force(q) + c * v) / m;
  };

  VerletRun run;
  run.trajectory.samples.push_back({0.0, 0.0, scenario.v0, e0});
  double q = 0.0;
  double v = scenario.v0;
  double a = 0.0;
  double t = 0.0;
  for (;;) {
    const double q_prev = q;
    const double v_half = v + 0.5 * dt * a;
    q += dt * v_half;
    t += dt;
    ++run.steps;
    if (!std::isfinite(q)) {
      run.reason = "non-finite state";
      return run;
    }
    run.max_penetration = std::max(run.max_penetration, q);
    if (q > limits.max_excursion * q_max) {
      run.reason = "penetration exceeded excursion limit";
      return run;
    }
    if (q > limit) {
      run.reason = "penetration left the potential's domain";
      return run;
    }
    a = acceleration(q, v_half);
    v = v_half + 0.5 * dt * a;
    const double e = 0.5 * m * v * v + (q > 0.0 ? pot.energy(q) : 0.0);
    run.peak_energy_drift = std::max(run.peak_energy_drift, std::abs(e - e0) / e0);
    if (!std::isfinite(e)) {
      run.reason = "non-finite state";
      return run;
    }
    if (q > 0.0) run.trajectory.samples.push_back({t, q, v, e});
    if (run.peak_energy_drift > limits.max_energy_drift) {
      run.reason = "energy drift exceeded limit";
      return run;
    }
    if (q <= 0.0) {
      run.trajectory.duration = t - dt * q / (q - q_prev);
      run.trajectory.exit_speed = std::abs(v);
      run.trajectory.peak_penetration = run.max_penetration;
      run.stable = true;
      run.reason = "contact completed";
      return run;
    }
    if (run.steps >= max_steps) {
      run.reason = "no exit within the step budget";
      return run;
    }
  }
}

HarmonicVerletResult verlet_harmonic(const ReferenceConstants& refs, double dtau,
                                     std::size_t steps) {
  if (!(dtau > 0.0)) throw DomainError("verlet_harmonic: step must be > 0");
  const double omega2 = refs.K() / refs.M();
  // Each quarter of the run covers at least two periods.
  const double per_period = 2.0 * std::numbers::pi / (std::sqrt(omega2) * dtau);
  const auto needed = static_cast<std::size_t>(std::min(8.0 * per_period, 1e7)) + 1;
  const std::size_t n = std::max(steps, needed);
  const std::size_t quarter = n / 4;

  double x = 0.0, v = 1.0, a = 0.0;
  double first_peak = 0.0, last_peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v_half = v + 0.5 * dtau * a;
    x += dtau * v_half;
    a = -omega2 * x;
    v = v_half + 0.5 * dtau * a;
    if (!std::isfinite(x) || !std::isfinite(v)) {
      return {false, std::numeric_limits<double>::infinity()};
    }
    if (i < quarter) first_peak = std::max(first_peak, std::abs(x));
    if (i >= n - quarter) last_peak = std::max(last_peak, std::abs(x));
  }
  const double growth = last_peak / first_peak;
  return {growth < 2.0, growth};
}

DampedHarmonic::DampedHarmonic(const ReferenceConstants& refs, double c0, double energy)
    : refs_(refs) {
  if (!(energy > 0.0)) throw DomainError("DampedHarmonic: energy must be > 0");
  if (!(c0 >= 0.0)) throw DomainError("DampedHarmonic: C0 must be >= 0");
  zeta_ = c0 / (2.0 * std::sqrt(refs.K() * refs.M()));
  restitution_from_ratio(zeta_);  // rejects zeta >= 1
  sigma_ = zeta_ * refs.omega0();
  omega_d_ = refs.omega0() * std::sqrt(1.0 - zeta_ * zeta_);
  amplitude_ = std::sqrt(2.0 * energy / refs.M()) / omega_d_;
}

TransformedState DampedHarmonic::state(double tau) const {
  const double envelope = amplitude_ * std::exp(-sigma_ * tau);
  const double s = std::sin(omega_d_ * tau);
  const double c = std::cos(omega_d_ * tau);
  const double x = envelope * s;
  const double xp = envelope * (omega_d_ * c - sigma_ * s);
  return {tau, x, xp, harmonic_energy(refs_, x, xp)};
}

double DampedHarmonic::half_period() const { return std::numbers::pi / omega_d_; }

double DampedHarmonic::restitution() const { return std::exp(-sigma_ * half_period()); }

double DampedHarmonic::spiral_radius(double x, double x_prime) const {
  return std::hypot(omega_d_ * x, x_prime + sigma_ * x);
}

TransformedTrajectory analytic_damped_oscillator(const ReferenceConstants& refs, double c0,
                                                 double energy, std::size_t n_samples) {
  const DampedHarmonic solution(refs, c0, energy);
  const std::size_t n = std::max<std::size_t>(n_samples, 2);
  TransformedTrajectory out;
  out.samples.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double tau =
        solution.half_period() * static_cast<double>(k) / static_cast<double>(n - 1);
    out.samples.push_back(solution.state(tau));
  }
  return out;
}

}  // namespace hc
