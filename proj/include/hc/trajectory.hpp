#pragma once

#include <vector>

namespace hc {

/// Physical state along a contact: time, penetration, penetration rate and
/// mechanical energy (1/2) m qdot^2 + U(q).
struct PhysicalSample {
  double t;
  double q;
  double qdot;
  double energy;
};

/// One contact, from entry (q = 0, qdot = v0) to the first exit crossing.
struct Trajectory {
  std::vector<PhysicalSample> samples;
  double exit_speed = 0.0;
  double duration = 0.0;
  double peak_penetration = 0.0;
};

/// State in the regularised harmonic space. energy is the harmonic energy
/// (1/2) M x'^2 + (1/2) K x^2.
struct TransformedState {
  double tau;
  double x;
  double x_prime;
  double energy;
};

struct TransformedTrajectory {
  std::vector<TransformedState> samples;
};

}  // namespace hc
