#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hc/damping.hpp"
#include "hc/dynamics.hpp"
#include "hc/errors.hpp"
#include "hc/regularize.hpp"
#include "support/fixtures.hpp"

using namespace hc;
using namespace hc::test;

namespace {

// U = q^2/2 + q^3 with no analytic contact limit, so the numeric path runs.
class SmoothCubic final : public ContactPotential {
 public:
  double energy(double q) const override { return 0.5 * q * q + q * q * q; }
  double force(double q) const override { return q + 3 * q * q; }
  double stiffness(double q) const override { return 1 + 6 * q; }
  std::string describe() const override { return "smooth cubic"; }
};

// U = q^1.5 hidden behind the generic interface.
class SublinearHidden final : public ContactPotential {
 public:
  double energy(double q) const override { return std::pow(q, 1.5); }
  double force(double q) const override { return 1.5 * std::sqrt(q); }
  double stiffness(double q) const override { return 0.75 / std::sqrt(q); }
  std::string describe() const override { return "hidden sublinear"; }
};

}  // namespace

TEST(ReferenceConstants, RejectsNonPositive) {
  EXPECT_THROW(ReferenceConstants(0.0, 1.0), DomainError);
  EXPECT_THROW(ReferenceConstants(1.0, -2.0), DomainError);
  EXPECT_DOUBLE_EQ(ReferenceConstants(4.0, 1.0).omega0(), 2.0);
}

TEST(EnergyCoordinate, LinearSpringIsIdentity) {
  const auto pot = power_law(1.0, 1.0);
  const ReferenceConstants refs(1.0, 1.0);
  EXPECT_DOUBLE_EQ(x_of_q(*pot, refs, 0.7), 0.7);
  EXPECT_DOUBLE_EQ(q_of_x(*pot, refs, 0.7), 0.7);
  EXPECT_EQ(x_of_q(*pot, refs, 0.0), 0.0);
  EXPECT_EQ(q_of_x(*pot, refs, 0.0), 0.0);
}

TEST(EnergyCoordinate, EllipsoidAtPeakPenetration) {
  const auto pot = ellipsoid();
  const double e = kinetic(kMass, 0.99);
  const double q_max = turning_point(*pot, e);
  EXPECT_LT(relative(x_of_q(*pot, ReferenceConstants(1.0, 1.0), q_max), std::sqrt(2 * 0.0245025)),
            1e-12);
  EXPECT_NEAR(x_of_q(*pot, ReferenceConstants(1.0, 1.0), q_max), 0.221370, 1e-6);
}

TEST(EnergyCoordinate, RoundTripOnRandomEllipsoidPoints) {
  const auto pot = ellipsoid();
  const ReferenceConstants refs(1.0, 0.75);
  const double x_top = x_of_q(*pot, refs, kA);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, x_top);
  for (int i = 0; i < 100; ++i) {
    const double x = dist(rng);
    EXPECT_LT(relative(x_of_q(*pot, refs, q_of_x(*pot, refs, x)), x), 1e-12) << "x=" << x;
  }
}

TEST(EnergyCoordinate, StrictlyIncreasing) {
  const auto pot = ellipsoid();
  const ReferenceConstants refs(1.0, 0.75);
  double last = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = x_of_q(*pot, refs, kA * i / 1000.0);
    ASSERT_GT(x, last);
    last = x;
  }
}

TEST(EnergyCoordinate, Errors) {
  const auto pot = ellipsoid();
  const ReferenceConstants refs(1.0, 1.0);
  EXPECT_THROW(x_of_q(*pot, refs, -1e-6), DomainError);
  EXPECT_THROW(x_of_q(*pot, refs, 2 * kA), DomainError);
  EXPECT_THROW(q_of_x(*pot, refs, 1.01 * x_of_q(*pot, refs, kA)), RangeError);
  EXPECT_THROW(q_of_x(*pot, refs, -1.0), RangeError);
}

TEST(TimeGradient, LinearSpringIsUnity) {
  const auto pot = power_law(1.0, 1.0);
  const ReferenceConstants refs(1.0, 1.0);
  for (double q : {1e-6, 0.3, 5.0}) EXPECT_DOUBLE_EQ(time_gradient(*pot, refs, 1.0, q), 1.0);
}

TEST(TimeGradient, QuadraticForceAtUnitPenetration) {
  EXPECT_NEAR(time_gradient(*power_law(1.0, 2.0), ReferenceConstants(1.0, 1.0), 1.0, 1.0),
              1.0 / std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(time_gradient(*power_law(1.0, 2.0), ReferenceConstants(1.0, 1.0), 1.0, 1.0), 1.224745,
              5e-7);
}

TEST(TimeGradient, EllipsoidAtLowSpeedPeak) {
  const auto pot = ellipsoid();
  const ReferenceConstants refs(1.0, 0.75);
  const double e = kinetic(kMass, 0.5);
  const double q_max = turning_point(*pot, e);
  const double expected = std::sqrt(0.75 / (kMass * 1.0)) * 4.325435 / std::sqrt(2 * 0.00625);
  EXPECT_LT(relative(time_gradient(*pot, refs, kMass, q_max), expected), 1e-6);
}

TEST(TimeGradient, RejectsContactPoint) {
  EXPECT_THROW(time_gradient(*power_law(1.0, 2.0), ReferenceConstants(1, 1), 1.0, 0.0), DomainError);
  EXPECT_THROW(gradient_ratio(*power_law(1.0, 2.0), -1.0), DomainError);
}

TEST(EffectiveMass, ClosedForms) {
  const ReferenceConstants unit(1.0, 1.0);
  EXPECT_NEAR(effective_mass(*power_law(1.0, 2.0), unit, 1.0, 1.0), 2.0 / 3.0, 1e-15);
  const ReferenceConstants k3(3.0, 1.0);
  for (double q : {0.01, 0.5, 4.0}) {
    EXPECT_NEAR(effective_mass(*power_law(2.0, 1.0), k3, 1.0, q), 1.5, 1e-14);
  }
  EXPECT_THROW(effective_mass(*power_law(1.0, 2.0), unit, 1.0, 0.0), DomainError);
}

TEST(EffectiveMass, ConstantOnlyForLinearForce) {
  const ReferenceConstants refs(1.0, 1.0);
  auto spread = [&](double p) {
    const auto pot = power_law(1.0, p);
    double lo = INFINITY, hi = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double q = 1e-3 * std::pow(1e3, i / 199.0);
      const double m = effective_mass(*pot, refs, 1.0, q);
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    return (hi - lo) / hi;
  };
  EXPECT_LT(spread(1.0), 1e-14);
  EXPECT_GT(spread(0.5), 0.1);
  EXPECT_GT(spread(2.0), 0.1);
}

TEST(GradientLimit, AnalyticAndNumericPaths) {
  EXPECT_EQ(gradient_limit_at_zero(*power_law(1.0, 2.0), 1.0), 0.0);
  EXPECT_NEAR(gradient_limit_at_zero(SmoothCubic(), 0.1), 1.0, 1e-6);
  EXPECT_TRUE(std::isinf(gradient_limit_at_zero(SublinearHidden(), 0.1)));
  EXPECT_THROW(gradient_limit_at_zero(SmoothCubic(), 0.0), DomainError);
}

namespace {

Trajectory reference_run(PotentialPtr pot, double m, double v0, const ReferenceConstants& refs,
                         std::optional<DampingLaw> law = std::nullopt, std::size_t samples = 2000) {
  ReferenceOptions options;
  options.samples = samples;
  return simulate_reference(ImpactScenario(m, std::move(pot), v0, refs, std::move(law)), options);
}

}  // namespace

TEST(Transform, ConservativeEllipsoidConservesHarmonicEnergy) {
  const ReferenceConstants refs(1.0, 0.75);
  const auto pot = ellipsoid();
  const auto traj = reference_run(pot, kMass, 0.99, refs);
  const auto tx = transform_trajectory(*pot, refs, kMass, traj);
  const double e = kinetic(kMass, 0.99);
  ASSERT_EQ(tx.samples.size(), traj.samples.size());
  EXPECT_EQ(tx.samples.front().tau, 0.0);
  for (const auto& s : tx.samples) ASSERT_LE(std::abs(s.energy - e) / e, 1e-9);
  for (std::size_t i = 1; i < tx.samples.size(); ++i) ASSERT_GT(tx.samples[i].tau, tx.samples[i - 1].tau);
}

TEST(Transform, LinearSpringIsIdentityWhenReferencesMatch) {
  const double k = 4.0, m = 0.25;
  const auto pot = power_law(k, 1.0);
  const ReferenceConstants refs(k, m);
  const auto traj = reference_run(pot, m, 1.3, refs);
  const auto tx = transform_trajectory(*pot, refs, m, traj);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    EXPECT_NEAR(tx.samples[i].tau, traj.samples[i].t, 1e-14);
    EXPECT_NEAR(tx.samples[i].x, traj.samples[i].q, 1e-15);
    EXPECT_NEAR(tx.samples[i].x_prime, traj.samples[i].qdot, 1e-15);
  }
}

TEST(Transform, DampedEllipsoidMatchesExactOscillator) {
  const ReferenceConstants refs(1.0, 0.75);
  const auto pot = ellipsoid();
  const DampingLaw law = DampingLaw::universal(DampingSpec(0.5, refs, kMass), pot);
  const auto traj = reference_run(pot, kMass, 0.99, refs, law);
  const auto tx = transform_trajectory(*pot, refs, kMass, traj);
  EXPECT_LT(phase_deviation(tx, DampedHarmonic(refs, 0.5, kinetic(kMass, 0.99))), 1e-6);
}

TEST(Transform, DimensionlessTrajectoryIndependentOfReferences) {
  const auto pot = ellipsoid();
  const double e = kinetic(kMass, 0.99);
  const ReferenceConstants a(1.0, 0.75), b(7.0, 3.0);
  const auto traj = reference_run(pot, kMass, 0.99, a);
  const auto ta = transform_trajectory(*pot, a, kMass, traj);
  const auto tb = transform_trajectory(*pot, b, kMass, traj);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& sa = ta.samples[i];
    const auto& sb = tb.samples[i];
    EXPECT_NEAR(sa.x * std::sqrt(a.K() / (2 * e)), sb.x * std::sqrt(b.K() / (2 * e)), 1e-9);
    EXPECT_NEAR(sa.x_prime * std::sqrt(a.M() / (2 * e)), sb.x_prime * std::sqrt(b.M() / (2 * e)), 1e-9);
    EXPECT_NEAR(a.omega0() * sa.tau, b.omega0() * sb.tau, 1e-9 * std::numbers::pi);
  }
}

TEST(Transform, OddSampleCountAndPowerLawEndpoints) {
  const ReferenceConstants refs(1.0, 1.0);
  for (double p : {1.0, 1.5, 2.0}) {
    const auto pot = power_law(1e5, p);
    const auto traj = reference_run(pot, 0.05, 0.99, refs, std::nullopt, 1001);
    const auto tx = transform_trajectory(*pot, refs, 0.05, traj);
    EXPECT_LT(relative(tx.samples.back().tau, std::numbers::pi), 1e-7) << "p=" << p;
  }
}

TEST(Transform, TabulatedPotentialFollowsTheEllipse) {
  // The interpolant has a kink at every knot and the graded grid crowds
  // knots into the entry and exit intervals.
  const ReferenceConstants refs(1.0, 0.75);
  const auto pot = cubic_table();
  for (std::size_t samples : {std::size_t{200}, std::size_t{2000}}) {
    for (double v0 : kSpeeds) {
      const auto traj = reference_run(pot, kMass, v0, refs, std::nullopt, samples);
      const auto tx = transform_trajectory(*pot, refs, kMass, traj);
      EXPECT_LT(phase_deviation(tx, DampedHarmonic(refs, 0.0, kinetic(kMass, v0))), 1e-9)
          << "samples=" << samples << " v0=" << v0;
    }
  }
}

TEST(Transform, IntegratorStepGridAndDivergentGradient) {
  const ReferenceConstants refs(1.0, 1.0);
  const auto steps = reference_run(ellipsoid(), kMass, 0.99, refs, std::nullopt, 0);
  const auto tx = transform_trajectory(*ellipsoid(), refs, kMass, steps);
  EXPECT_LT(phase_deviation(tx, DampedHarmonic(refs, 0.0, kinetic(kMass, 0.99))), 1e-9);

  // dtau/dt grows without bound at contact for p < 1 but stays integrable.
  const auto soft = power_law(1e3, 0.5);
  const auto traj = reference_run(soft, kMass, 0.99, refs);
  const auto soft_tx = transform_trajectory(*soft, refs, kMass, traj);
  EXPECT_LT(relative(soft_tx.samples.back().tau, std::numbers::pi), 1e-9);
}

TEST(Transform, InputValidation) {
  const auto pot = power_law(1.0, 2.0);
  const ReferenceConstants refs(1.0, 1.0);
  Trajectory backwards;
  backwards.samples = {{0.0, 0.0, 1.0, 0.5}, {0.2, 0.1, 0.9, 0.5}, {0.1, 0.15, 0.8, 0.5}};
  EXPECT_THROW(transform_trajectory(*pot, refs, 1.0, backwards), NonMonotonicTime);
  Trajectory negative;
  negative.samples = {{0.0, 0.0, 1.0, 0.5}, {0.1, -0.1, 0.9, 0.5}};
  EXPECT_THROW(transform_trajectory(*pot, refs, 1.0, negative), DomainError);
  EXPECT_TRUE(transform_trajectory(*pot, refs, 1.0, Trajectory{}).samples.empty());
}
