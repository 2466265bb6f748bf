#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hc {

/// One-dimensional elastic contact potential U(q) on q >= 0.
///
/// Implementations satisfy U(0) = 0 and U'(q) > 0 on (0, q_limit()), so every
/// energy up to U(q_limit()) has a unique turning point. Objects are immutable
/// after construction and may be shared between threads.
class ContactPotential {
 public:
  virtual ~ContactPotential() = default;

  /// Stored energy at penetration q (J).
  virtual double energy(double q) const = 0;
  /// Contact force U'(q) (N).
  virtual double force(double q) const = 0;
  /// Contact stiffness U''(q) (N/m). Only guaranteed on (0, q_limit()).
  virtual double stiffness(double q) const = 0;
  /// U(q_top) - U(q_top - depth) for 0 <= depth <= q_top. Implementations
  /// keep full relative precision as depth -> 0; the default subtracts and
  /// switches to a second-order expansion for very small depths.
  virtual double energy_drop(double q_top, double depth) const;
  /// Penetrations where U'' is discontinuous, ascending. Integrators end
  /// their steps on these so no step straddles a kink.
  virtual std::vector<double> breakpoints() const { return {}; }
  /// Largest admissible penetration; +inf when unbounded.
  virtual double q_limit() const { return std::numeric_limits<double>::infinity(); }

  /// Analytic value of lim_{q->0+} U'(q)/sqrt(2U(q)) when the potential knows
  /// it (+inf for a divergent limit). nullopt means "estimate numerically".
  virtual std::optional<double> gradient_limit_at_zero() const { return std::nullopt; }

  virtual std::string describe() const = 0;
};

using PotentialPtr = std::shared_ptr<const ContactPotential>;

/// U(q) = k q^(p+1) / (p+1), force k q^p.
class PowerLawPotential final : public ContactPotential {
 public:
  PowerLawPotential(double k, double p);

  double energy(double q) const override;
  double force(double q) const override;
  double stiffness(double q) const override;
  double energy_drop(double q_top, double depth) const override;
  std::optional<double> gradient_limit_at_zero() const override;
  std::string describe() const override;

  double k() const { return k_; }
  double p() const { return p_; }

 private:
  double k_;
  double p_;
};

/// Exact overlap of an ellipsoid pressed into a flat wall along its a-axis.
struct OverlapGeometry {
  double area;    ///< cross-section S_n (m^2)
  double volume;  ///< overlap volume V_c (m^3)
};

/// Alpha-regularised volumetric contact of an ellipsoid on a plane:
/// U = K_n / (alpha+1) * V_c^(alpha+1), force K_n V_c^alpha S_n.
/// Penetration is restricted to [0, a].
class VolumetricEllipsoidPotential final : public ContactPotential {
 public:
  VolumetricEllipsoidPotential(double a, double b, double c, double stiffness_kn, double alpha);

  double energy(double q) const override;
  double force(double q) const override;
  double stiffness(double q) const override;
  double energy_drop(double q_top, double depth) const override;
  double q_limit() const override { return a_; }
  std::optional<double> gradient_limit_at_zero() const override { return 0.0; }
  std::string describe() const override;

  /// Closed-form (S_n, V_c); throws DomainError outside [0, a].
  OverlapGeometry overlap(double delta) const;

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  double kn() const { return kn_; }
  double alpha() const { return alpha_; }

 private:
  void check_domain(double delta) const;

  double a_, b_, c_, kn_, alpha_;
  double shape_;  // pi b c / a^2
};

/// Potential given by samples (q_i, U_i), interpolated with a monotone
/// piecewise-cubic Hermite curve. stiffness() is the interpolant's second
/// derivative and is therefore only approximate.
class TabulatedPotential final : public ContactPotential {
 public:
  explicit TabulatedPotential(std::vector<std::pair<double, double>> samples);

  /// Reads a two-column CSV with header `q_m,U_J`.
  static TabulatedPotential from_csv(const std::string& path);

  double energy(double q) const override;
  double force(double q) const override;
  double stiffness(double q) const override;
  double energy_drop(double q_top, double depth) const override;
  double q_limit() const override { return q_.back(); }
  std::vector<double> breakpoints() const override {
    return {q_.begin() + 1, q_.end() - 1};
  }
  std::string describe() const override;

  std::size_t size() const { return q_.size(); }

 private:
  std::size_t interval(double q) const;
  // U change over local coordinates [t1 - dt, t1] of interval i.
  double segment_drop(std::size_t i, double t1, double dt) const;

  std::vector<double> q_;
  std::vector<double> u_;
  std::vector<double> slope_;  // dU/dq at the knots
};

/// Unique q_max > 0 with U(q_max) = E.
///
/// Brackets by doubling (or clamps to q_limit), bisects to adjacent doubles
/// and finishes with one guarded Newton step.
double turning_point(const ContactPotential& pot, double energy);

/// 2 U U'' - (U')^2; non-negative where the contact stiffens.
double stiffening_margin(const ContactPotential& pot, double q);

/// Closed-form ellipsoid overlap; free-function spelling of
/// VolumetricEllipsoidPotential::overlap.
inline OverlapGeometry overlap_geometry(const VolumetricEllipsoidPotential& pot, double delta) {
  return pot.overlap(delta);
}

}  // namespace hc
