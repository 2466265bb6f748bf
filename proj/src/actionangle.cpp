#include "hc/actionangle.hpp"

#include <cmath>
#include <numbers>

#include "hc/errors.hpp"
#include "hc/quadrature.hpp"

namespace hc {

namespace {

constexpr double kRtol = 1e-13;

struct Orbit {
  double q_max;
  double f_top;   // U'(q_max)
};

Orbit make_orbit(const ContactPotential& pot, double mass, double energy) {
  if (!(mass > 0.0)) throw DomainError("mass must be > 0");
  const double q_max = turning_point(pot, energy);
  const double f_top = pot.force(q_max);
  if (!(f_top > 0.0)) {
    throw QuadratureFailure("degenerate turning point: U'(q_max) = 0");
  }
  return {q_max, f_top};
}

// U(q_max) - U(q) at q = q_max (1 - c2), c2 = cos^2(theta).
double energy_gap(const ContactPotential& pot, const Orbit& orbit, double c2) {
  return pot.energy_drop(orbit.q_max, orbit.q_max * std::min(c2, 1.0));
}

}  // namespace

double action(const ContactPotential& pot, double mass, double energy) {
  const Orbit orbit = make_orbit(pot, mass, energy);
  auto integrand = [&](double theta) {
    const double c = std::cos(theta);
    const double gap = std::max(0.0, energy_gap(pot, orbit, c * c));
    return std::sqrt(gap) * orbit.q_max * std::sin(2.0 * theta);
  };
  const double integral = integrate_adaptive(integrand, 0.0, 0.5 * std::numbers::pi, kRtol);
  return std::sqrt(2.0 * mass) / std::numbers::pi * integral;
}

double dJ_dE(const ContactPotential& pot, double mass, double energy) {
  const Orbit orbit = make_orbit(pot, mass, energy);
  auto integrand = [&](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double gap = energy_gap(pot, orbit, c * c);
    if (!(gap > 0.0)) {
      // sin(2 theta) / sqrt(gap) -> 2 sqrt(q_max / U'(q_max)) as theta -> pi/2
      return 2.0 * s * std::sqrt(orbit.q_max / orbit.f_top);
    }
    return orbit.q_max * 2.0 * s * c / std::sqrt(gap);
  };
  const double integral = integrate_adaptive(integrand, 0.0, 0.5 * std::numbers::pi, kRtol);
  return std::sqrt(2.0 * mass) / (2.0 * std::numbers::pi) * integral;
}

double contact_duration(const ContactPotential& pot, double mass, double energy) {
  return 2.0 * std::numbers::pi * dJ_dE(pot, mass, energy);
}

ActionAngleReport action_angle_report(const ContactPotential& pot, double mass, double energy) {
  const double derivative = dJ_dE(pot, mass, energy);
  return {energy, turning_point(pot, energy), action(pot, mass, energy), derivative,
          2.0 * std::numbers::pi * derivative};
}

}  // namespace hc
