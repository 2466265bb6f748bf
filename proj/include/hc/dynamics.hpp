#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "hc/damping.hpp"
#include "hc/potentials.hpp"
#include "hc/regularize.hpp"
#include "hc/trajectory.hpp"

namespace hc {

/// A single normal impact: the body meets the wall at q = 0 with speed v0.
struct ImpactScenario {
  ImpactScenario(double mass, PotentialPtr potential, double v0, ReferenceConstants refs,
                 std::optional<DampingLaw> damping = std::nullopt);

  double mass;
  PotentialPtr potential;
  double v0;
  ReferenceConstants refs;
  std::optional<DampingLaw> damping;

  /// Impact kinetic energy (1/2) m v0^2.
  double energy() const { return 0.5 * mass * v0 * v0; }
  /// Conservative turning point for the impact energy.
  double q_max() const { return turning_point(*potential, energy()); }
};

struct ReferenceOptions {
  double rtol = 1e-13;
  double atol = 1e-13;
  /// Uniform samples in t over the contact; 0 returns the integrator's own
  /// step nodes plus the exit state.
  std::size_t samples = 2000;
  /// Give up (NoExitDetected) after this multiple of the conservative
  /// contact duration.
  double max_time_factor = 10.0;
};

/// Adaptive Dormand-Prince integration of m q'' + C(q) q' + U'(q) = 0 from
/// entry to the first exit crossing q = 0, located on the dense output and
/// polished with Newton steps on the real integrator.
///
/// For event location only, the force is continued oddly past q = 0, i.e.
/// F(-q) = -U'(q) and C(-q) = C(q). Reported samples all have q >= 0.
Trajectory simulate_reference(const ImpactScenario& scenario, const ReferenceOptions& options = {});

/// Thresholds that end a velocity-Verlet run as unstable.
struct VerletLimits {
  double max_energy_drift = 0.05;   ///< relative to the impact energy
  double max_excursion = 2.0;       ///< in units of the conservative q_max
  double max_time_factor = 10.0;
};

struct VerletRun {
  Trajectory trajectory;
  bool stable = false;
  double peak_energy_drift = 0.0;
  double max_penetration = 0.0;
  std::size_t steps = 0;
  std::string reason;
};

/// Fixed-step velocity Verlet through one contact; stops at the first step
/// with q <= 0 or as soon as a limit is crossed. After the separating step
/// the contact force is zero.
VerletRun simulate_verlet(const ImpactScenario& scenario, double dt, const VerletLimits& limits = {});

/// Velocity Verlet on M x'' + K x = 0 (the regularised space), run for a
/// fixed number of steps without contact termination.
struct HarmonicVerletResult {
  bool stable;
  /// Peak |x| over the last quarter divided by the peak over the first.
  double growth;
};
HarmonicVerletResult verlet_harmonic(const ReferenceConstants& refs, double dtau,
                                     std::size_t steps = 4000);

/// Exact solution of M x'' + C0 x' + K x = 0 with x(0) = 0, x'(0) = sqrt(2E/M).
class DampedHarmonic {
 public:
  DampedHarmonic(const ReferenceConstants& refs, double c0, double energy);

  TransformedState state(double tau) const;
  /// tau at which x returns to zero: pi / omega_d.
  double half_period() const;
  double damping_ratio() const { return zeta_; }
  double decay_rate() const { return sigma_; }
  double damped_frequency() const { return omega_d_; }
  /// -x'(half_period) / x'(0).
  double restitution() const;
  /// Radius in the (omega_d x, x' + sigma x) plane; equals
  /// omega_d A exp(-sigma tau) along the exact solution.
  double spiral_radius(double x, double x_prime) const;
  double amplitude() const { return amplitude_; }

 private:
  ReferenceConstants refs_;
  double zeta_;
  double sigma_;
  double omega_d_;
  double amplitude_;
};

/// n_samples points of the exact underdamped solution, uniform in tau over
/// the first half period.
TransformedTrajectory analytic_damped_oscillator(const ReferenceConstants& refs, double c0,
                                                 double energy, std::size_t n_samples);

}  // namespace hc
