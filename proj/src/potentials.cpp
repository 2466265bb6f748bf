#include "hc/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "hc/errors.hpp"

namespace hc {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidPotential(std::string(name) + " must be positive and finite");
  }
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double ContactPotential::energy_drop(double q_top, double depth) const {
  if (!(depth >= 0.0) || depth > q_top) throw DomainError("energy_drop: depth outside [0, q_top]");
  if (depth < 1e-7 * q_top) {
    return force(q_top) * depth - 0.5 * stiffness(q_top) * depth * depth;
  }
  return energy(q_top) - energy(q_top - depth);
}

namespace {

// top^n - (top - depth)^n without cancellation.
double power_drop(double top, double depth, double n) {
  return std::pow(top, n) * -std::expm1(n * std::log1p(-depth / top));
}

}  // namespace

// ---------------------------------------------------------------------------
// Power law

PowerLawPotential::PowerLawPotential(double k, double p) : k_(k), p_(p) {
  require_positive(k, "k");
  require_positive(p, "p");
}

double PowerLawPotential::energy(double q) const {
  if (q < 0.0) throw DomainError("power law: q must be >= 0");
  return k_ * std::pow(q, p_ + 1.0) / (p_ + 1.0);
}

double PowerLawPotential::force(double q) const {
  if (q < 0.0) throw DomainError("power law: q must be >= 0");
  return k_ * std::pow(q, p_);
}

double PowerLawPotential::stiffness(double q) const {
  if (q < 0.0) throw DomainError("power law: q must be >= 0");
  if (q == 0.0) {
    if (p_ > 1.0) return 0.0;
    if (p_ == 1.0) return k_;
    return std::numeric_limits<double>::infinity();
  }
  return k_ * p_ * std::pow(q, p_ - 1.0);
}

double PowerLawPotential::energy_drop(double q_top, double depth) const {
  if (!(depth >= 0.0) || depth > q_top) throw DomainError("energy_drop: depth outside [0, q_top]");
  return k_ / (p_ + 1.0) * power_drop(q_top, depth, p_ + 1.0);
}

std::optional<double> PowerLawPotential::gradient_limit_at_zero() const {
  // U'/sqrt(2U) = sqrt(k (p+1) / 2) q^((p-1)/2)
  if (p_ > 1.0) return 0.0;
  if (p_ == 1.0) return std::sqrt(k_);
  return std::numeric_limits<double>::infinity();
}

std::string PowerLawPotential::describe() const {
  return "power_law(k=" + format_double(k_) + ", p=" + format_double(p_) + ")";
}

// ---------------------------------------------------------------------------
// Volumetric ellipsoid

VolumetricEllipsoidPotential::VolumetricEllipsoidPotential(double a, double b, double c,
                                                           double stiffness_kn, double alpha)
    : a_(a), b_(b), c_(c), kn_(stiffness_kn), alpha_(alpha) {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(c, "c");
  require_positive(stiffness_kn, "K_n");
  require_positive(alpha, "alpha");
  shape_ = std::numbers::pi * b_ * c_ / (a_ * a_);
}

void VolumetricEllipsoidPotential::check_domain(double delta) const {
  if (!(delta >= 0.0) || delta > a_) {
    throw DomainError("ellipsoid: penetration " + format_double(delta) + " outside [0, a]");
  }
}

OverlapGeometry VolumetricEllipsoidPotential::overlap(double delta) const {
  check_domain(delta);
  return {shape_ * (2.0 * a_ * delta - delta * delta),
          shape_ * (a_ * delta * delta - delta * delta * delta / 3.0)};
}

double VolumetricEllipsoidPotential::energy(double q) const {
  const auto g = overlap(q);
  return kn_ / (alpha_ + 1.0) * std::pow(g.volume, alpha_ + 1.0);
}

double VolumetricEllipsoidPotential::force(double q) const {
  const auto g = overlap(q);
  return kn_ * std::pow(g.volume, alpha_) * g.area;
}

double VolumetricEllipsoidPotential::stiffness(double q) const {
  const auto g = overlap(q);
  if (q == 0.0) return 0.0;
  const double darea = shape_ * (2.0 * a_ - 2.0 * q);
  return kn_ * (alpha_ * std::pow(g.volume, alpha_ - 1.0) * g.area * g.area +
                std::pow(g.volume, alpha_) * darea);
}

double VolumetricEllipsoidPotential::energy_drop(double q_top, double depth) const {
  check_domain(q_top);
  if (!(depth >= 0.0) || depth > q_top) throw DomainError("energy_drop: depth outside [0, q_top]");
  const double lo = q_top - depth;
  const double volume_top = overlap(q_top).volume;
  const double volume_drop =
      shape_ * depth * (a_ * (q_top + lo) - (q_top * q_top + q_top * lo + lo * lo) / 3.0);
  const double n = alpha_ + 1.0;
  return kn_ / n * std::pow(volume_top, n) * -std::expm1(n * std::log1p(-volume_drop / volume_top));
}

std::string VolumetricEllipsoidPotential::describe() const {
  return "ellipsoid(a=" + format_double(a_) + ", b=" + format_double(b_) +
         ", c=" + format_double(c_) + ", K_n=" + format_double(kn_) +
         ", alpha=" + format_double(alpha_) + ")";
}

// ---------------------------------------------------------------------------
// Tabulated

TabulatedPotential::TabulatedPotential(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw InvalidPotential("tabulated potential needs at least two samples");
  if (samples.front().first != 0.0 || samples.front().second != 0.0) {
    throw InvalidPotential("tabulated potential must start at (0, 0)");
  }
  q_.reserve(samples.size());
  u_.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [q, u] = samples[i];
    if (!std::isfinite(q) || !std::isfinite(u)) throw InvalidPotential("non-finite sample");
    if (i > 0 && (q <= q_.back() || u <= u_.back())) {
      throw InvalidPotential("tabulated samples must be strictly increasing in q and U (row " +
                             std::to_string(i) + ")");
    }
    q_.push_back(q);
    u_.push_back(u);
  }

  // Monotone slopes: weighted harmonic mean of neighbouring secants in the
  // interior, shape-preserving three-point formula at the ends.
  const std::size_t n = q_.size();
  std::vector<double> h(n - 1), secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = q_[i + 1] - q_[i];
    secant[i] = (u_[i + 1] - u_[i]) / h[i];
  }
  slope_.assign(n, 0.0);
  if (n == 2) {
    slope_[0] = slope_[1] = secant[0];
    return;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    slope_[i] = (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i]);
  }
  auto end_slope = [](double h0, double h1, double s0, double s1) {
    double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if (d < 0.0) d = 0.0;
    else if (d > 3.0 * s0) d = 3.0 * s0;
    return d;
  };
  slope_[0] = end_slope(h[0], h[1], secant[0], secant[1]);
  slope_[n - 1] = end_slope(h[n - 2], h[n - 3], secant[n - 2], secant[n - 3]);
}

TabulatedPotential TabulatedPotential::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidPotential("cannot open tabulated potential file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw InvalidPotential(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "q_m,U_J") throw InvalidPotential(path + ": expected header 'q_m,U_J'");

  std::vector<std::pair<double, double>> samples;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw InvalidPotential(path + ": line " + std::to_string(row) + " has no comma");
    }
    try {
      std::size_t used = 0;
      const double q = std::stod(line.substr(0, comma));
      const std::string rest = line.substr(comma + 1);
      const double u = std::stod(rest, &used);
      if (rest.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
      samples.emplace_back(q, u);
    } catch (const std::logic_error&) {
      throw InvalidPotential(path + ": malformed number on line " + std::to_string(row));
    }
  }
  return TabulatedPotential(std::move(samples));
}

std::size_t TabulatedPotential::interval(double q) const {
  if (!(q >= 0.0) || q > q_.back()) {
    throw DomainError("tabulated potential: q=" + format_double(q) + " outside table");
  }
  const auto it = std::upper_bound(q_.begin(), q_.end(), q);
  const auto i = static_cast<std::size_t>(std::distance(q_.begin(), it));
  return std::min(i == 0 ? 0 : i - 1, q_.size() - 2);
}

double TabulatedPotential::energy(double q) const {
  const std::size_t i = interval(q);
  const double h = q_[i + 1] - q_[i];
  const double t = (q - q_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * u_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * u_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double TabulatedPotential::force(double q) const {
  const std::size_t i = interval(q);
  const double h = q_[i + 1] - q_[i];
  const double t = (q - q_[i]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * (u_[i] - u_[i + 1])) / h + (3 * t2 - 4 * t + 1) * slope_[i] +
         (3 * t2 - 2 * t) * slope_[i + 1];
}

double TabulatedPotential::stiffness(double q) const {
  const std::size_t i = interval(q);
  const double h = q_[i + 1] - q_[i];
  const double t = (q - q_[i]) / h;
  return ((12 * t - 6) * (u_[i] - u_[i + 1])) / (h * h) +
         ((6 * t - 4) * slope_[i] + (6 * t - 2) * slope_[i + 1]) / h;
}

double TabulatedPotential::segment_drop(std::size_t i, double t1, double dt) const {
  const double h = q_[i + 1] - q_[i];
  const double t0 = t1 - dt;
  const double sum = t1 + t0;
  const double sq = t1 * t1 + t1 * t0 + t0 * t0;
  return dt * ((u_[i + 1] - u_[i]) * (3.0 * sum - 2.0 * sq) + h * slope_[i] * (sq - 2.0 * sum + 1.0) +
               h * slope_[i + 1] * (sq - sum));
}

double TabulatedPotential::energy_drop(double q_top, double depth) const {
  if (!(depth >= 0.0) || depth > q_top) throw DomainError("energy_drop: depth outside [0, q_top]");
  const double lo = q_top - depth;
  const std::size_t j = interval(q_top);
  const std::size_t i = interval(lo);
  auto local = [&](std::size_t k, double q) { return (q - q_[k]) / (q_[k + 1] - q_[k]); };
  if (i == j) {
    const double h = q_[j + 1] - q_[j];
    return segment_drop(j, local(j, q_top), depth / h);
  }
  const double below_knot = (q_[i + 1] - lo) / (q_[i + 1] - q_[i]);
  double drop = segment_drop(j, local(j, q_top), local(j, q_top)) + segment_drop(i, 1.0, below_knot);
  drop += u_[j] - u_[i + 1];
  return drop;
}

std::string TabulatedPotential::describe() const {
  return "tabulated(" + std::to_string(q_.size()) + " samples, q_max=" + format_double(q_.back()) +
         ")";
}

// ---------------------------------------------------------------------------

double turning_point(const ContactPotential& pot, double energy) {
  if (!(energy > 0.0) || !std::isfinite(energy)) {
    throw DomainError("turning_point: energy must be positive and finite");
  }
  const double limit = pot.q_limit();

  double lo = 0.0;
  double hi = 0.0;
  if (std::isfinite(limit)) {
    if (energy > pot.energy(limit)) {
      throw EnergyOutOfRange("energy " + format_double(energy) +
                             " J exceeds the potential's attainable maximum " +
                             format_double(pot.energy(limit)) + " J");
    }
    hi = limit;
  } else {
    double probe = 1.0;
    double u_probe = pot.energy(probe);
    if (u_probe >= energy) {
      while (u_probe >= energy) {
        const double next = 0.5 * probe;
        const double u_next = pot.energy(next);
        if (next == 0.0 || u_next > u_probe) throw InvalidPotential("U not increasing near 0");
        hi = probe;
        probe = next;
        u_probe = u_next;
      }
      lo = probe;
    } else {
      int guard = 0;
      while (u_probe < energy) {
        const double next = 2.0 * probe;
        const double u_next = pot.energy(next);
        if (!(u_next > u_probe) || pot.force(next) <= 0.0) {
          throw InvalidPotential("U not strictly increasing at q=" + format_double(next));
        }
        if (++guard > 2100) throw EnergyOutOfRange("no turning point below overflow");
        lo = probe;
        probe = next;
        u_probe = u_next;
      }
      hi = probe;
    }
  }

  for (;;) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double u_mid = pot.energy(mid);
    if (u_mid < energy) lo = mid;
    else hi = mid;
  }

  double best = (std::abs(pot.energy(hi) - energy) <= std::abs(pot.energy(lo) - energy)) ? hi : lo;
  if (best <= 0.0) best = hi;
  const double slope = pot.force(best);
  if (!(slope > 0.0)) {
    if (best == limit) return best;
    throw InvalidPotential("U' not positive at the turning point q=" + format_double(best));
  }
  const double newton = best - (pot.energy(best) - energy) / slope;
  if (newton > 0.0 && newton <= limit &&
      std::abs(newton - best) <= 4.0 * std::numeric_limits<double>::epsilon() * best &&
      std::abs(pot.energy(newton) - energy) < std::abs(pot.energy(best) - energy)) {
    best = newton;
  }
  return best;
}

double stiffening_margin(const ContactPotential& pot, double q) {
  if (!(q > 0.0) || q > pot.q_limit()) {
    throw DomainError("stiffening_margin: q must lie in (0, q_limit]");
  }
  const double u = pot.energy(q);
  const double f = pot.force(q);
  return 2.0 * u * pot.stiffness(q) - f * f;
}

}  // namespace hc
