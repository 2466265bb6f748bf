#pragma once

#include <cmath>

#include "hc/potentials.hpp"
#include "hc/trajectory.hpp"

namespace hc {

/// Arbitrary positive reference stiffness K and mass M of the harmonic
/// oscillator the contact is mapped onto.
class ReferenceConstants {
 public:
  ReferenceConstants(double stiffness, double mass);

  double K() const { return k_; }
  double M() const { return m_; }
  /// Natural frequency sqrt(K/M).
  double omega0() const { return std::sqrt(k_ / m_); }

 private:
  double k_;
  double m_;
};

/// U'(q) / sqrt(2 U(q)); the reference-free part of dx/dq and dtau/dt.
double gradient_ratio(const ContactPotential& pot, double q);

/// Energy coordinate x = sqrt(2 U(q) / K).
double x_of_q(const ContactPotential& pot, const ReferenceConstants& refs, double q);

/// Inverse of x_of_q; throws RangeError when (1/2) K x^2 is not attainable.
double q_of_x(const ContactPotential& pot, const ReferenceConstants& refs, double x);

/// dtau/dt = sqrt(M / (m K)) U'(q) / sqrt(2 U(q)) for q > 0.
double time_gradient(const ContactPotential& pot, const ReferenceConstants& refs, double mass,
                     double q);

/// Position-dependent mass of the point-canonical lift without time
/// reparametrisation: 2 m K U / (U')^2.
double effective_mass(const ContactPotential& pot, const ReferenceConstants& refs, double mass,
                      double q);

inline double harmonic_energy(const ReferenceConstants& refs, double x, double x_prime) {
  return 0.5 * refs.M() * x_prime * x_prime + 0.5 * refs.K() * x * x;
}

/// Maps a sampled physical trajectory into (tau, x, x').
///
/// x' comes from the exact relation x' = sqrt(m/M) qdot. tau accumulates
/// interval by interval: the exact dtau/dt is integrated by adaptive
/// Gauss-Legendre along the cubic Hermite curve through the two end states
/// (q, qdot), with a substitution that tames the contact-point behaviour on
/// intervals touching q = 0, where the gradient is never evaluated.
TransformedTrajectory transform_trajectory(const ContactPotential& pot,
                                           const ReferenceConstants& refs, double mass,
                                           const Trajectory& trajectory);

/// lim_{q->0+} U'(q)/sqrt(2U(q)); +inf when divergent.
///
/// Uses the potential's analytic value when it provides one. Otherwise the
/// ratio is sampled at q_scale * {1e-6, 1e-7, 1e-8}: a consistent increase of
/// more than 2% per decade toward the contact is read as divergence, anything
/// else is extrapolated linearly to q = 0.
double gradient_limit_at_zero(const ContactPotential& pot, double q_scale);

}  // namespace hc
