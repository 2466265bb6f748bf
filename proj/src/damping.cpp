#include "hc/damping.hpp"

#include <cmath>
#include <numbers>

#include "hc/errors.hpp"

namespace hc {

DampingSpec::DampingSpec(double c0, ReferenceConstants reference, double m)
    : C0(c0), refs(reference), mass(m) {
  if (!(c0 >= 0.0) || !std::isfinite(c0)) throw DomainError("C0 must be finite and >= 0");
  if (!(m > 0.0)) throw DomainError("mass must be > 0");
}

double universal_C(const DampingSpec& spec, const ContactPotential& pot, double q) {
  if (!(q > 0.0)) throw DomainError("universal_C: q must be > 0");
  return spec.C0 * std::sqrt(spec.mass / spec.refs.M()) * pot.force(q) /
         std::sqrt(2.0 * spec.refs.K() * pot.energy(q));
}

double damping_ratio(const DampingSpec& spec) {
  return spec.C0 / (2.0 * std::sqrt(spec.refs.K() * spec.refs.M()));
}

double restitution_from_ratio(double zeta) {
  if (!(zeta >= 0.0)) throw DomainError("damping ratio must be >= 0");
  if (zeta >= 1.0) {
    throw OverdampedUnsupported("damping ratio " + std::to_string(zeta) +
                                " >= 1: the contact does not separate within half a cycle");
  }
  return std::exp(-std::numbers::pi * zeta / std::sqrt(1.0 - zeta * zeta));
}

double predicted_restitution(const DampingSpec& spec) {
  return restitution_from_ratio(damping_ratio(spec));
}

double transformed_damping(const ContactPotential& pot, const ReferenceConstants& refs,
                           double mass, double q, double physical_c) {
  const double dx_dq = gradient_ratio(pot, q) / std::sqrt(refs.K());
  return physical_c * std::sqrt(refs.M() / mass) / dx_dq;
}

DampingLaw::DampingLaw(std::function<double(double)> coefficient, double at_contact,
                       std::string name, std::optional<DampingSpec> spec)
    : coefficient_(std::move(coefficient)),
      at_contact_(at_contact),
      name_(std::move(name)),
      spec_(std::move(spec)) {}

DampingLaw DampingLaw::universal(const DampingSpec& spec, PotentialPtr pot) {
  if (!pot) throw DomainError("universal damping needs a potential");
  const double limit_scale = std::isfinite(pot->q_limit()) ? pot->q_limit() : 1.0;
  const double g0 = gradient_limit_at_zero(*pot, limit_scale);
  double at_contact = 0.0;
  if (std::isfinite(g0)) {
    at_contact = spec.C0 * std::sqrt(spec.mass / (spec.refs.M() * spec.refs.K())) * g0;
  }
  auto coefficient = [spec, pot](double q) { return universal_C(spec, *pot, q); };
  return DampingLaw(std::move(coefficient), at_contact, "universal", spec);
}

DampingLaw DampingLaw::constant(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("constant damping must be >= 0");
  return DampingLaw([c](double) { return c; }, c, "constant", std::nullopt);
}

double DampingLaw::operator()(double q) const {
  if (q == 0.0) return at_contact_;
  return coefficient_(q);
}

}  // namespace hc
