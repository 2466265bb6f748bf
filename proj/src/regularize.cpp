#include "hc/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "hc/errors.hpp"
#include "hc/quadrature.hpp"

namespace hc {

ReferenceConstants::ReferenceConstants(double stiffness, double mass) : k_(stiffness), m_(mass) {
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) throw DomainError("reference K must be > 0");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("reference M must be > 0");
}

double gradient_ratio(const ContactPotential& pot, double q) {
  if (!(q > 0.0) || q > pot.q_limit()) throw DomainError("gradient ratio needs q in (0, q_limit]");
  return pot.force(q) / std::sqrt(2.0 * pot.energy(q));
}

double x_of_q(const ContactPotential& pot, const ReferenceConstants& refs, double q) {
  if (!(q >= 0.0) || q > pot.q_limit()) throw DomainError("x_of_q: q outside potential domain");
  return std::sqrt(2.0 * pot.energy(q) / refs.K());
}

double q_of_x(const ContactPotential& pot, const ReferenceConstants& refs, double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw RangeError("q_of_x: x must be finite and >= 0");
  if (x == 0.0) return 0.0;
  const double energy = 0.5 * refs.K() * x * x;
  try {
    return turning_point(pot, energy);
  } catch (const EnergyOutOfRange& e) {
    throw RangeError(std::string("q_of_x: ") + e.what());
  }
}

double time_gradient(const ContactPotential& pot, const ReferenceConstants& refs, double mass,
                     double q) {
  if (!(mass > 0.0)) throw DomainError("mass must be > 0");
  return std::sqrt(refs.M() / (mass * refs.K())) * gradient_ratio(pot, q);
}

double effective_mass(const ContactPotential& pot, const ReferenceConstants& refs, double mass,
                      double q) {
  if (!(q > 0.0) || q > pot.q_limit()) throw DomainError("effective_mass needs q in (0, q_limit]");
  const double f = pot.force(q);
  return 2.0 * mass * refs.K() * pot.energy(q) / (f * f);
}

namespace {

// Cubic Hermite through (t0, q0, v0) and (t1, q1, v1).
struct HermiteSegment {
  double t0, h, q0, q1, m0, m1;  // m = h * qdot

  HermiteSegment(const PhysicalSample& a, const PhysicalSample& b)
      : t0(a.t), h(b.t - a.t), q0(a.q), q1(b.q), m0(h * a.qdot), m1(h * b.qdot) {}

  double at(double t) const { return from_start(t - t0); }

  // Position a time d after the start or before the end. Taking the offset
  // directly keeps full precision where absolute times would round.
  double from_start(double d) const {
    const double u = d / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * q0 + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * q1 +
           (u3 - u2) * m1;
  }

  double from_end(double d) const {
    const double v = d / h;
    const double v2 = v * v;
    const double v3 = v2 * v;
    return (3 * v2 - 2 * v3) * q0 + (v2 - v3) * m0 - (v - 2 * v2 + v3) * m1 +
           (1 - 3 * v2 + 2 * v3) * q1;
  }

  // Interior times where dq/dt = 0.
  std::vector<double> turning_times() const {
    const double a = 6 * q0 + 3 * m0 - 6 * q1 + 3 * m1;
    const double b = -6 * q0 - 4 * m0 + 6 * q1 - 2 * m1;
    const double c = m0;
    std::vector<double> roots;
    if (std::abs(a) <= 1e-14 * (std::abs(b) + std::abs(c))) {
      if (b != 0.0) roots.push_back(-c / b);
    } else {
      const double disc = b * b - 4 * a * c;
      if (disc >= 0.0) {
        const double r = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (r != 0.0) roots.push_back(c / r);
        roots.push_back(r / a);
      }
    }
    std::vector<double> times;
    for (double u : roots) {
      if (u > 0.0 && u < 1.0) times.push_back(t0 + u * h);
    }
    std::sort(times.begin(), times.end());
    return times;
  }

  // Time in [lo, hi] where the monotone curve passes level.
  double crossing(double lo, double hi, double level) const {
    const bool rising = at(hi) > at(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      if (mid <= lo || mid >= hi) break;
      if ((at(mid) < level) == rising) lo = mid;
      else hi = mid;
    }
    return lo + 0.5 * (hi - lo);
  }
};

// Sub-interval ends of [t0, t1] at which the gradient may have a kink:
// every time the reconstructed path crosses a breakpoint of the potential.
std::vector<double> kink_free_pieces(const HermiteSegment& segment, double t0, double t1,
                                     const std::vector<double>& knots) {
  std::vector<double> monotone{t0};
  for (double t : segment.turning_times()) monotone.push_back(t);
  monotone.push_back(t1);
  std::vector<double> ends{t0};
  for (std::size_t i = 0; i + 1 < monotone.size(); ++i) {
    const double a = monotone[i];
    const double b = monotone[i + 1];
    const double qa = segment.at(a);
    const double qb = segment.at(b);
    const double lo = std::min(qa, qb);
    const double hi = std::max(qa, qb);
    auto first = std::upper_bound(knots.begin(), knots.end(), lo);
    auto last = std::lower_bound(knots.begin(), knots.end(), hi);
    std::vector<double> crossings;
    for (auto it = first; it != last; ++it) crossings.push_back(segment.crossing(a, b, *it));
    std::sort(crossings.begin(), crossings.end());
    for (double t : crossings) {
      if (t > ends.back()) ends.push_back(t);
    }
    if (b > ends.back()) ends.push_back(b);
  }
  return ends;
}

constexpr double kIntervalRtol = 1e-12;

// Integral of gradient(d) for offsets d in [0, length] away from a contact
// point; d = length * u^4 flattens the power-law behaviour at the contact.
template <typename G>
double from_contact(G&& gradient, double length) {
  auto integrand = [&](double u) {
    const double u3 = u * u * u;
    return gradient(length * u3 * u) * 4.0 * u3 * length;
  };
  return integrate_adaptive(integrand, 0.0, 1.0, kIntervalRtol, 30);
}

}  // namespace

TransformedTrajectory transform_trajectory(const ContactPotential& pot,
                                           const ReferenceConstants& refs, double mass,
                                           const Trajectory& trajectory) {
  if (!(mass > 0.0)) throw DomainError("mass must be > 0");
  const auto& s = trajectory.samples;
  const std::size_t n = s.size();
  TransformedTrajectory out;
  if (n == 0) return out;

  for (std::size_t i = 0; i < n; ++i) {
    if (!(s[i].q >= 0.0)) {
      throw DomainError("transform_trajectory: negative penetration at sample " + std::to_string(i));
    }
    if (i > 0 && !(s[i].t > s[i - 1].t)) {
      throw NonMonotonicTime("transform_trajectory: time not strictly increasing at sample " +
                             std::to_string(i));
    }
  }

  auto interior = [&](std::size_t i) { return s[i].q > 0.0; };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!interior(i)) {
      throw DomainError("transform_trajectory: q = 0 inside the contact at sample " +
                        std::to_string(i));
    }
  }

  // Each interval integrates the exact gradient along the cubic Hermite
  // reconstruction of q(t) from its end states, split wherever the path
  // crosses a kink of the potential. Pieces that start or end at the contact
  // point are substituted so the contact singularity is mild.
  const std::vector<double> knots = pot.breakpoints();
  std::vector<double> increment(n > 1 ? n - 1 : 0, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const HermiteSegment segment(s[k], s[k + 1]);
    auto rate = [&](double q) {
      return q > 0.0 ? time_gradient(pot, refs, mass, std::min(q, pot.q_limit())) : 0.0;
    };
    auto after_start = [&](double d) { return rate(segment.from_start(d)); };
    auto before_end = [&](double d) { return rate(segment.from_end(d)); };
    const double t0 = s[k].t;
    const double t1 = s[k + 1].t;
    const bool left_contact = !interior(k);
    const bool right_contact = !interior(k + 1);
    std::vector<double> ends = kink_free_pieces(segment, t0, t1, knots);
    if (left_contact && right_contact && ends.size() == 2) {
      ends.insert(ends.begin() + 1, 0.5 * (t0 + t1));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
      const double a = ends[i];
      const double b = ends[i + 1];
      if (i == 0 && left_contact) {
        sum += from_contact(after_start, b - a);
      } else if (i + 2 == ends.size() && right_contact) {
        sum += from_contact(before_end, b - a);
      } else if (b - t0 <= t1 - a) {
        sum += integrate_adaptive(after_start, a - t0, b - t0, kIntervalRtol, 30);
      } else {
        sum += integrate_adaptive(before_end, t1 - b, t1 - a, kIntervalRtol, 30);
      }
    }
    increment[k] = sum;
  }

  out.samples.reserve(n);
  const double velocity_scale = std::sqrt(mass / refs.M());
  double tau = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) tau += increment[k - 1];
    const double x = x_of_q(pot, refs, s[k].q);
    const double xp = velocity_scale * s[k].qdot;
    out.samples.push_back({tau, x, xp, harmonic_energy(refs, x, xp)});
  }
  return out;
}

double gradient_limit_at_zero(const ContactPotential& pot, double q_scale) {
  if (const auto exact = pot.gradient_limit_at_zero()) return *exact;
  if (!(q_scale > 0.0)) throw DomainError("gradient_limit_at_zero: q_scale must be > 0");
  const double g1 = gradient_ratio(pot, 1e-6 * q_scale);
  const double g2 = gradient_ratio(pot, 1e-7 * q_scale);
  const double g3 = gradient_ratio(pot, 1e-8 * q_scale);
  if (g2 > 1.02 * g1 && g3 > 1.02 * g2) return std::numeric_limits<double>::infinity();
  return std::max(0.0, g3 - (g2 - g3) / 9.0);
}

}  // namespace hc
