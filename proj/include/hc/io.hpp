#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "hc/actionangle.hpp"
#include "hc/stability.hpp"
#include "hc/trajectory.hpp"

namespace hc {

/// 17 significant digits in scientific notation (round-trips exactly).
std::string format_sci(double value);
/// Fixed notation with the given number of decimals.
std::string format_fixed(double value, int decimals);

/// CSV `t,q,qdot,E`, preceded by `# ` comment lines.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::vector<std::string>& comments = {});
/// CSV `tau,x,x_prime,E_h`, preceded by `# ` comment lines.
void write_transformed_csv(std::ostream& out, const TransformedTrajectory& trajectory,
                           const std::vector<std::string>& comments = {});

/// Reads a physical trajectory CSV (comment lines and header `t,q,qdot,E`).
Trajectory read_trajectory_csv(const std::string& path);

/// Writes content to a temporary sibling and renames it over path, so a
/// failed run never leaves a partial file behind.
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::json to_json(const ActionAngleReport& report);
nlohmann::json to_json(const StabilityReport& report);

}  // namespace hc
