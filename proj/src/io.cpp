#include "hc/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hc/errors.hpp"

namespace hc {

std::string format_sci(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.16e", value);
  return buffer;
}

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

namespace {

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& line : comments) out << "# " << line << '\n';
}

// JSON cannot hold inf; report it as null.
nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "t,q,qdot,E\n";
  for (const auto& s : trajectory.samples) {
    out << format_sci(s.t) << ',' << format_sci(s.q) << ',' << format_sci(s.qdot) << ','
        << format_sci(s.energy) << '\n';
  }
}

void write_transformed_csv(std::ostream& out, const TransformedTrajectory& trajectory,
                           const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "tau,x,x_prime,E_h\n";
  for (const auto& s : trajectory.samples) {
    out << format_sci(s.tau) << ',' << format_sci(s.x) << ',' << format_sci(s.x_prime) << ','
        << format_sci(s.energy) << '\n';
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file: " + path);
  Trajectory trajectory;
  std::string line;
  bool header_seen = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != "t,q,qdot,E") throw ConfigError(path + ": expected header 't,q,qdot,E'");
      header_seen = true;
      continue;
    }
    std::istringstream fields(line);
    PhysicalSample s{};
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(fields >> s.t >> c1 >> s.q >> c2 >> s.qdot >> c3 >> s.energy) || c1 != ',' ||
        c2 != ',' || c3 != ',') {
      throw ConfigError(path + ": malformed row " + std::to_string(row));
    }
    trajectory.samples.push_back(s);
  }
  if (!header_seen) throw ConfigError(path + ": missing header");
  if (!trajectory.samples.empty()) {
    trajectory.duration = trajectory.samples.back().t - trajectory.samples.front().t;
    trajectory.exit_speed = std::abs(trajectory.samples.back().qdot);
    for (const auto& s : trajectory.samples) {
      trajectory.peak_penetration = std::max(trajectory.peak_penetration, s.q);
    }
  }
  return trajectory;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path temp = target;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + temp.string());
    out << content;
    out.flush();
    if (!out) throw Error("write failed for " + temp.string());
  }
  fs::rename(temp, target);
}

nlohmann::json to_json(const ActionAngleReport& report) {
  return {{"E", report.energy},
          {"q_max", report.q_max},
          {"J", report.action},
          {"dJ_dE", report.dJ_dE},
          {"T", report.duration}};
}

nlohmann::json to_json(const StabilityReport& report) {
  return {{"regime", to_string(report.regime)},
          {"q_max", report.q_max},
          {"force_at_qmax", report.force_at_qmax},
          {"grad_sup", number_or_null(report.grad_sup)},
          {"grad_argmax", report.grad_argmax},
          {"dt_safe", report.dt_safe}};
}

}  // namespace hc
