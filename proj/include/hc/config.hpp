#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hc/damping.hpp"
#include "hc/potentials.hpp"
#include "hc/regularize.hpp"

namespace hc {

struct DampingConfig {
  enum class Law { Universal, Constant };
  Law law = Law::Universal;
  std::vector<double> c0_values;  ///< universal law, one run per value
  double constant_c = 0.0;        ///< constant physical dashpot (N s/m)
};

/// One damping setting of a run; `law` empty means conservative.
struct DampingVariant {
  std::string label;
  double c0;  ///< virtual C0 (0 for conservative or constant runs)
  std::optional<DampingLaw> law;
};

/// Parsed scenario configuration (strict JSON; unknown keys are rejected).
///
///   {
///     "potential": {"type": "ellipsoid", "a": .., "b": .., "c": .., "K_n": .., "alpha": ..}
///                | {"type": "power_law", "k": .., "p": ..}
///                | {"type": "tabulated", "path": "file.csv"},
///     "m": 0.05,
///     "v0": [0.5, 0.99, 1.5],
///     "refs": {"K": 1, "M": 0.75},                     optional, default 1/1
///     "damping": {"C0": [0, 0.5]}                      optional
///              | {"law": "constant", "C": 0.02},
///     "samples": 2000,                                 optional
///     "out_dir": "out"                                 optional
///   }
struct ScenarioConfig {
  nlohmann::json source;
  PotentialPtr potential;
  double mass = 0.0;
  std::vector<double> speeds;
  ReferenceConstants refs{1.0, 1.0};
  std::optional<DampingConfig> damping;
  std::size_t samples = 2000;
  std::string out_dir;

  /// Damping settings to run: conservative when no damping is configured.
  std::vector<DampingVariant> damping_variants() const;
};

/// Relative tabulated paths resolve against base_dir. Throws ConfigError
/// naming the offending field.
ScenarioConfig parse_config(const nlohmann::json& document, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

}  // namespace hc
