#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hc/errors.hpp"

namespace hc {

/// Dormand-Prince 5(4) with PI step-size control and Hairer's fourth-order
/// continuous extension. State is any fixed-size Eigen column vector.
template <typename State>
class DormandPrince5 {
 public:
  using Rhs = std::function<State(double, const State&)>;

  struct Options {
    double rtol = 1e-10;
    double atol = 1e-10;
    double initial_step = 0.0;  ///< 0 picks a heuristic step
    double max_step = std::numeric_limits<double>::infinity();
  };

  /// One accepted step with its dense-output coefficients.
  struct Step {
    double t0;
    double h;
    State y0;
    State y1;
    std::array<State, 5> rcont;

    State dense(double t) const {
      const double s = (t - t0) / h;
      const double s1 = 1.0 - s;
      return rcont[0] + s * (rcont[1] + s1 * (rcont[2] + s * (rcont[3] + s1 * rcont[4])));
    }
  };

  DormandPrince5(Rhs rhs, double t0, const State& y0, Options options)
      : rhs_(std::move(rhs)), t_(t0), y_(y0), options_(options) {
    k1_ = rhs_(t_, y_);
    h_ = options_.initial_step > 0.0 ? options_.initial_step : initial_step();
  }

  double t() const { return t_; }
  const State& y() const { return y_; }
  std::size_t rejected() const { return rejected_; }

  /// Advances by one accepted step that ends no later than t_stop.
  Step advance(double t_stop = std::numeric_limits<double>::infinity()) {
    for (;;) {
      const double free_h = std::min(h_, options_.max_step);
      const bool capped = t_stop - t_ <= free_h;
      const double h = capped ? t_stop - t_ : free_h;
      if (!(h > 0.0) || t_ + h == t_) throw StepSizeUnderflow("step size underflow at t=" + std::to_string(t_));
      std::array<State, 7> k;
      k[0] = k1_;
      const State y1 = stages(t_, y_, h, k);
      const State err = h * (e1 * k[0] + e3 * k[2] + e4 * k[3] + e5 * k[4] + e6 * k[5] + e7 * k[6]);
      const State scale =
          (options_.atol + options_.rtol * y_.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).matrix();
      double norm = std::sqrt((err.array() / scale.array()).square().mean());
      if (!std::isfinite(norm)) norm = 1e10;

      constexpr double beta = 0.04;
      const double fac11 = std::pow(norm, 0.2 - 0.75 * beta);
      if (norm <= 1.0) {
        double fac = fac11 / std::pow(facold_, beta);
        fac = std::clamp(fac / 0.9, 0.1, 5.0);
        Step step{t_, h, y_, y1, {}};
        step.rcont[0] = y_;
        step.rcont[1] = y1 - y_;
        step.rcont[2] = h * k[0] - step.rcont[1];
        step.rcont[3] = step.rcont[1] - h * k[6] - step.rcont[2];
        step.rcont[4] = h * (d1 * k[0] + d3 * k[2] + d4 * k[3] + d5 * k[4] + d6 * k[5] + d7 * k[6]);
        facold_ = std::max(norm, 1e-4);
        t_ = capped ? t_stop : t_ + h;
        y_ = y1;
        k1_ = k[6];
        h_ = capped ? std::max(h_, h / fac) : h / fac;
        return step;
      }
      ++rejected_;
      h_ = h / std::min(5.0, fac11 / 0.9);
    }
  }

  /// Rewinds to the start of a previously returned step.
  void rewind(const Step& step) {
    t_ = step.t0;
    y_ = step.y0;
    k1_ = rhs_(t_, y_);
  }

  /// Plain single step of size h from (t, y) without error control.
  State single_step(double t, const State& y, double h) const {
    std::array<State, 7> k;
    k[0] = rhs_(t, y);
    return stages(t, y, h, k);
  }

 private:
  State stages(double t, const State& y, double h, std::array<State, 7>& k) const {
    k[1] = rhs_(t + c2 * h, y + h * (a21 * k[0]));
    k[2] = rhs_(t + c3 * h, y + h * (a31 * k[0] + a32 * k[1]));
    k[3] = rhs_(t + c4 * h, y + h * (a41 * k[0] + a42 * k[1] + a43 * k[2]));
    k[4] = rhs_(t + c5 * h, y + h * (a51 * k[0] + a52 * k[1] + a53 * k[2] + a54 * k[3]));
    k[5] = rhs_(t + h, y + h * (a61 * k[0] + a62 * k[1] + a63 * k[2] + a64 * k[3] + a65 * k[4]));
    const State y1 = y + h * (a71 * k[0] + a73 * k[2] + a74 * k[3] + a75 * k[4] + a76 * k[5]);
    k[6] = rhs_(t + h, y1);
    return y1;
  }

  // Hairer-Norsett-Wanner starting step heuristic.
  double initial_step() const {
    const State scale = (options_.atol + options_.rtol * y_.cwiseAbs().array()).matrix();
    const double d0 = std::sqrt((y_.array() / scale.array()).square().mean());
    const double d1v = std::sqrt((k1_.array() / scale.array()).square().mean());
    double h0 = (d0 < 1e-5 || d1v < 1e-5) ? 1e-6 : 0.01 * d0 / d1v;
    h0 = std::min(h0, options_.max_step);
    const State y1 = y_ + h0 * k1_;
    const State k2 = rhs_(t_ + h0, y1);
    const double d2 = std::sqrt(((k2 - k1_).array() / scale.array()).square().mean()) / h0;
    const double dmax = std::max(d1v, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
    return std::min({100.0 * h0, h1, options_.max_step});
  }

  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                          a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double d1 = -12715105075.0 / 11282082432.0,
                          d3 = 87487479700.0 / 32700410799.0,
                          d4 = -10690763975.0 / 1880347072.0,
                          d5 = 701980252875.0 / 199316789632.0,
                          d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

  Rhs rhs_;
  double t_;
  State y_;
  State k1_;
  double h_ = 0.0;
  double facold_ = 1e-4;
  std::size_t rejected_ = 0;
  Options options_;
};

}  // namespace hc
