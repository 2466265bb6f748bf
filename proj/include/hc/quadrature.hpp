#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "hc/errors.hpp"

namespace hc {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point rule; roots of P_n by Newton iteration.
GaussLegendreRule gauss_legendre(int n);

/// Shared 20-point rule used by the adaptive integrator.
const GaussLegendreRule& default_rule();

template <typename F>
double integrate_fixed(F&& f, double a, double b, const GaussLegendreRule& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace detail {

template <typename F>
double adapt(F& f, double a, double b, double whole, double abs_tol, int depth,
             const GaussLegendreRule& rule) {
  const double mid = 0.5 * (a + b);
  const double left = integrate_fixed(f, a, mid, rule);
  const double right = integrate_fixed(f, mid, b, rule);
  const double refined = left + right;
  if (std::abs(refined - whole) <= abs_tol) return refined;
  if (depth <= 0 || !std::isfinite(refined)) {
    throw QuadratureFailure("adaptive Gauss-Legendre refinement stalled on [" + std::to_string(a) +
                            ", " + std::to_string(b) + "]");
  }
  return adapt(f, a, mid, left, 0.5 * abs_tol, depth - 1, rule) +
         adapt(f, mid, b, right, 0.5 * abs_tol, depth - 1, rule);
}

}  // namespace detail

/// Adaptive panel bisection with the 20-point rule until a panel's two halves
/// agree with the whole to the share of rtol * |estimate| it was given.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double rtol, int max_depth = 40) {
  const auto& rule = default_rule();
  const double whole = integrate_fixed(f, a, b, rule);
  if (!std::isfinite(whole)) throw QuadratureFailure("non-finite integrand");
  const double abs_tol = std::max(rtol * std::abs(whole), 1e-300);
  return detail::adapt(f, a, b, whole, abs_tol, max_depth, rule);
}

}  // namespace hc
