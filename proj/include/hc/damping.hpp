#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hc/potentials.hpp"
#include "hc/regularize.hpp"

namespace hc {

/// Virtual damping C0 of the target oscillator M x'' + C0 x' + K x = 0 and
/// the physical mass it is mapped back to.
struct DampingSpec {
  DampingSpec(double c0, ReferenceConstants refs, double mass);

  double C0;
  ReferenceConstants refs;
  double mass;
};

/// The damping law under which the regularised motion is a constant
/// coefficient spring-dashpot:
///   C(q) = C0 sqrt(m/M) U'(q) / sqrt(2 K U(q)),  q > 0.
double universal_C(const DampingSpec& spec, const ContactPotential& pot, double q);

/// zeta = C0 / (2 sqrt(K M)).
double damping_ratio(const DampingSpec& spec);

/// exp(-pi zeta / sqrt(1 - zeta^2)); OverdampedUnsupported for zeta >= 1.
double predicted_restitution(const DampingSpec& spec);
double restitution_from_ratio(double zeta);

/// Coefficient seen in the regularised space for a physical damping value
/// C at q: C_*(x) = C sqrt(M/m) dq/dx.
double transformed_damping(const ContactPotential& pot, const ReferenceConstants& refs,
                           double mass, double q, double physical_c);

/// Physical damping coefficient C(q) used by the integrators.
class DampingLaw {
 public:
  /// Universal law C(q) for the given damping settings on pot.
  static DampingLaw universal(const DampingSpec& spec, PotentialPtr pot);
  /// Constant dashpot C(q) = c (not universal; kept for the converse check).
  static DampingLaw constant(double c);

  /// C(q) for q > 0; at q == 0 the continuous extension (0 when it diverges).
  double operator()(double q) const;

  const std::optional<DampingSpec>& spec() const { return spec_; }
  bool is_universal() const { return spec_.has_value(); }
  const std::string& name() const { return name_; }

 private:
  DampingLaw(std::function<double(double)> coefficient, double at_contact, std::string name,
             std::optional<DampingSpec> spec);

  std::function<double(double)> coefficient_;
  double at_contact_;
  std::string name_;
  std::optional<DampingSpec> spec_;
};

}  // namespace hc
