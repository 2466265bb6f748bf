#pragma once

#include "hc/potentials.hpp"

namespace hc {

/// Action-angle summary of one conservative contact at energy E.
struct ActionAngleReport {
  double energy;
  double q_max;
  double action;
  double dJ_dE;
  /// Contact duration from entry to exit, 2 pi dJ/dE.
  double duration;
};

/// J(E) = sqrt(2m)/pi * integral_0^{q_max} sqrt(E - U(q)) dq.
double action(const ContactPotential& pot, double mass, double energy);

/// dJ/dE = sqrt(2m)/(2 pi) * integral_0^{q_max} dq / sqrt(E - U(q)).
///
/// The inverse-square-root singularity at the turning point is removed by
/// q = q_max sin^2(theta) before adaptive Gauss-Legendre on theta.
double dJ_dE(const ContactPotential& pot, double mass, double energy);

/// 2 pi dJ/dE: time from q = 0 entry to q = 0 exit.
double contact_duration(const ContactPotential& pot, double mass, double energy);

ActionAngleReport action_angle_report(const ContactPotential& pot, double mass, double energy);

}  // namespace hc
