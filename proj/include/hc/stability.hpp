#pragma once

#include <string>

#include "hc/dynamics.hpp"
#include "hc/potentials.hpp"
#include "hc/regularize.hpp"

namespace hc {

enum class Regime { Stiffening, SofteningOrLinear, Mixed, Degenerate };

std::string to_string(Regime regime);

/// Shape class of the contact on (0, q_max].
///
/// Degenerate when U'/sqrt(2U) diverges at contact. Otherwise the stiffening
/// margin 2UU'' - U'^2 is sampled on a 10^4-point log+linear grid with a
/// tolerance of 1e-12 times max(2UU'', U'^2): all within +tol is
/// SofteningOrLinear (so the exact linear spring lands here), all above
/// -tol is Stiffening, anything else Mixed.
Regime classify_regime(const ContactPotential& pot, double q_max);

struct GradientSupremum {
  double value;   ///< sup of U'/sqrt(2U) over (0, q_max]; +inf when divergent
  double argmax;  ///< 0 when attained in the contact limit
};

GradientSupremum gradient_supremum(const ContactPotential& pot, double q_max, Regime regime);

/// Delta t_safe = Delta tau_crit / max dtau/dt with Delta tau_crit = 2/Omega0;
/// equal to 2 sqrt(m) / sup U'/sqrt(2U) for every choice of refs.
/// Throws DegenerateBound when the supremum diverges.
double dt_safe_general(const ContactPotential& pot, double mass, double q_max,
                       const ReferenceConstants& refs = ReferenceConstants(1.0, 1.0));

/// 2 m v0 / U'(q_max); valid only for stiffening contacts.
double dt_safe_stiffening(double mass, double v0, double force_at_qmax);

/// Checked form: classifies the contact and throws RegimeMismatch unless it
/// stiffens.
double dt_safe_stiffening(const ContactPotential& pot, double mass, double v0);

struct StabilityReport {
  Regime regime;
  double q_max;
  double force_at_qmax;
  double grad_sup;
  double grad_argmax;
  double dt_safe;  ///< 0 when Degenerate
};

StabilityReport stability_report(const ContactPotential& pot, double mass, double v0,
                                 const ReferenceConstants& refs = ReferenceConstants(1.0, 1.0));

/// Runs velocity Verlet through one conservative contact at fixed dt and
/// reports whether it stayed within the VerletLimits.
VerletRun verify_bound(const PotentialPtr& pot, double mass, double v0, double dt,
                       const VerletLimits& limits = {});

}  // namespace hc
