#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "hc/dynamics.hpp"
#include "hc/potentials.hpp"
#include "hc/quadrature.hpp"

namespace hc::test {

// Ellipsoid of the reference bouncing-body scenario.
constexpr double kA = 0.015;
constexpr double kB = 0.008;
constexpr double kC = 0.008;
constexpr double kKn = 1e8;
constexpr double kAlpha = 0.5;
constexpr double kMass = 0.05;
inline const std::vector<double> kSpeeds{0.50, 0.99, 1.50};

inline std::shared_ptr<const VolumetricEllipsoidPotential> ellipsoid() {
  return std::make_shared<const VolumetricEllipsoidPotential>(kA, kB, kC, kKn, kAlpha);
}

inline std::shared_ptr<const PowerLawPotential> power_law(double k, double p) {
  return std::make_shared<const PowerLawPotential>(k, p);
}

// U = k q^3 / 3 with k = 1e6 N/m^2, sampled on a graded grid.
constexpr double kTableK = 1e6;
inline std::shared_ptr<const TabulatedPotential> cubic_table(double q_end = 0.02, int n = 400) {
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) / n;
    const double q = q_end * s * s;
    samples.emplace_back(q, kTableK * q * q * q / 3.0);
  }
  return std::make_shared<const TabulatedPotential>(std::move(samples));
}

inline double kinetic(double m, double v) { return 0.5 * m * v * v; }

inline double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Independent action oracle: composite trapezoid in theta after
// q = q_max sin^2(theta). Smooth periodic-like integrand, so trapezoid
// converges fast without any adaptive logic.
inline double action_trapezoid(const ContactPotential& pot, double m, double energy, double q_max,
                               int panels) {
  const double half_pi = 0.5 * std::numbers::pi;
  auto f = [&](double theta) {
    const double s = std::sin(theta);
    const double q = q_max * s * s;
    const double gap = std::max(energy - pot.energy(q), 0.0);
    return std::sqrt(gap) * 2.0 * q_max * s * std::cos(theta);
  };
  const double h = half_pi / panels;
  double sum = 0.5 * (f(0.0) + f(half_pi));
  for (int i = 1; i < panels; ++i) sum += f(i * h);
  return std::sqrt(2.0 * m) / std::numbers::pi * sum * h;
}

// Largest deviation of a transformed trajectory from the exact oscillator
// at the same tau, with x scaled by the amplitude and x' by the entry speed.
inline double phase_deviation(const TransformedTrajectory& traj, const DampedHarmonic& exact) {
  const double v_scale = std::abs(exact.state(0.0).x_prime);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const auto e = exact.state(s.tau);
    worst = std::max({worst, std::abs(s.x - e.x) / exact.amplitude(),
                      std::abs(s.x_prime - e.x_prime) / v_scale});
  }
  return worst;
}

}  // namespace hc::test
