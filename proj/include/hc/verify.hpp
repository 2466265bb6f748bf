#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hc/config.hpp"

namespace hc {

enum class CheckStatus { Pass, Fail, Skipped, Info };

std::string to_string(CheckStatus status);

struct VerificationCheck {
  std::string name;
  double measured;
  double tolerance;
  std::string comparison;  ///< how measured relates to tolerance, e.g. "<=" or ">"
  CheckStatus status;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;

  /// True when no check failed (skipped and informational checks do not count).
  bool passed() const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

struct VerifyOptions {
  double rtol = 1e-13;
  double atol = 1e-13;
};

/// Runs every applicable property check on the configured scenario.
VerificationReport run_verification(const ScenarioConfig& config, const VerifyOptions& options = {});

}  // namespace hc
