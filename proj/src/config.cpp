#include "hc/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "hc/errors.hpp"
#include "hc/io.hpp"

namespace hc {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, const std::string& where,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) throw ConfigError(where + key + ": unknown key");
  }
}

const json& require(const json& object, const std::string& where, const std::string& key) {
  if (!object.contains(key)) throw ConfigError(where + key + ": missing");
  return object.at(key);
}

double positive(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError(field + ": must be a number");
  const double v = value.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field + ": must be positive");
  return v;
}

double non_negative(const json& value, const std::string& field) {
  if (!value.is_number()) throw ConfigError(field + ": must be a number");
  const double v = value.get<double>();
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field + ": must be >= 0");
  return v;
}

PotentialPtr parse_potential(const json& spec, const std::string& base_dir) {
  if (!spec.is_object()) throw ConfigError("potential: must be an object");
  const json& type = require(spec, "potential.", "type");
  if (!type.is_string()) throw ConfigError("potential.type: must be a string");
  const auto kind = type.get<std::string>();
  try {
    if (kind == "power_law") {
      reject_unknown(spec, "potential.", {"type", "k", "p"});
      return std::make_shared<PowerLawPotential>(
          positive(require(spec, "potential.", "k"), "potential.k"),
          positive(require(spec, "potential.", "p"), "potential.p"));
    }
    if (kind == "ellipsoid") {
      reject_unknown(spec, "potential.", {"type", "a", "b", "c", "K_n", "alpha"});
      return std::make_shared<VolumetricEllipsoidPotential>(
          positive(require(spec, "potential.", "a"), "potential.a"),
          positive(require(spec, "potential.", "b"), "potential.b"),
          positive(require(spec, "potential.", "c"), "potential.c"),
          positive(require(spec, "potential.", "K_n"), "potential.K_n"),
          positive(require(spec, "potential.", "alpha"), "potential.alpha"));
    }
    if (kind == "tabulated") {
      reject_unknown(spec, "potential.", {"type", "path"});
      const json& path = require(spec, "potential.", "path");
      if (!path.is_string()) throw ConfigError("potential.path: must be a string");
      std::filesystem::path file(path.get<std::string>());
      if (file.is_relative()) file = std::filesystem::path(base_dir) / file;
      return std::make_shared<TabulatedPotential>(TabulatedPotential::from_csv(file.string()));
    }
  } catch (const InvalidPotential& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("potential.type: unknown potential type '" + kind + "'");
}

std::vector<double> number_list(const json& value, const std::string& field, bool allow_zero) {
  std::vector<double> out;
  auto one = [&](const json& v, const std::string& name) {
    out.push_back(allow_zero ? non_negative(v, name) : positive(v, name));
  };
  if (value.is_array()) {
    if (value.empty()) throw ConfigError(field + ": must not be empty");
    for (std::size_t i = 0; i < value.size(); ++i) {
      one(value[i], field + "[" + std::to_string(i) + "]");
    }
  } else {
    one(value, field);
  }
  return out;
}

}  // namespace

std::vector<DampingVariant> ScenarioConfig::damping_variants() const {
  std::vector<DampingVariant> variants;
  if (!damping) {
    variants.push_back({"conservative", 0.0, std::nullopt});
    return variants;
  }
  if (damping->law == DampingConfig::Law::Constant) {
    variants.push_back({"constant_C" + format_fixed(damping->constant_c, 4), 0.0,
                        DampingLaw::constant(damping->constant_c)});
    return variants;
  }
  for (const double c0 : damping->c0_values) {
    if (c0 == 0.0) {
      variants.push_back({"C0_" + format_fixed(c0, 4), 0.0, std::nullopt});
    } else {
      variants.push_back({"C0_" + format_fixed(c0, 4), c0,
                          DampingLaw::universal(DampingSpec(c0, refs, mass), potential)});
    }
  }
  return variants;
}

ScenarioConfig parse_config(const nlohmann::json& document, const std::string& base_dir) {
  if (!document.is_object()) throw ConfigError("config: top level must be a JSON object");
  reject_unknown(document, "", {"potential", "m", "v0", "refs", "damping", "samples", "out_dir"});

  ScenarioConfig config;
  config.source = document;
  config.potential = parse_potential(require(document, "", "potential"), base_dir);
  config.mass = positive(require(document, "", "m"), "m");
  config.speeds = number_list(require(document, "", "v0"), "v0", false);

  if (document.contains("refs")) {
    const json& refs = document.at("refs");
    if (!refs.is_object()) throw ConfigError("refs: must be an object");
    reject_unknown(refs, "refs.", {"K", "M"});
    config.refs = ReferenceConstants(positive(require(refs, "refs.", "K"), "refs.K"),
                                     positive(require(refs, "refs.", "M"), "refs.M"));
  }

  if (document.contains("damping")) {
    const json& damping = document.at("damping");
    if (!damping.is_object()) throw ConfigError("damping: must be an object");
    reject_unknown(damping, "damping.", {"law", "C0", "C"});
    DampingConfig parsed;
    std::string law = "universal";
    if (damping.contains("law")) {
      if (!damping.at("law").is_string()) throw ConfigError("damping.law: must be a string");
      law = damping.at("law").get<std::string>();
    }
    if (law == "universal") {
      if (damping.contains("C")) throw ConfigError("damping.C: only valid with law 'constant'");
      parsed.law = DampingConfig::Law::Universal;
      parsed.c0_values = number_list(require(damping, "damping.", "C0"), "damping.C0", true);
      for (const double c0 : parsed.c0_values) {
        const double zeta = c0 / (2.0 * std::sqrt(config.refs.K() * config.refs.M()));
        if (zeta >= 1.0) {
          throw ConfigError("damping.C0: value " + format_sci(c0) +
                            " gives damping ratio >= 1 (overdamped contacts are unsupported)");
        }
      }
    } else if (law == "constant") {
      if (damping.contains("C0")) throw ConfigError("damping.C0: only valid with law 'universal'");
      parsed.law = DampingConfig::Law::Constant;
      parsed.constant_c = non_negative(require(damping, "damping.", "C"), "damping.C");
    } else {
      throw ConfigError("damping.law: unknown law '" + law + "'");
    }
    config.damping = parsed;
  }

  if (document.contains("samples")) {
    const json& samples = document.at("samples");
    if (!samples.is_number_integer() || samples.get<long long>() < 3) {
      throw ConfigError("samples: must be an integer >= 3");
    }
    config.samples = samples.get<std::size_t>();
  }
  if (document.contains("out_dir")) {
    if (!document.at("out_dir").is_string()) throw ConfigError("out_dir: must be a string");
    config.out_dir = document.at("out_dir").get<std::string>();
  }

  for (const double v0 : config.speeds) {
    const double energy = 0.5 * config.mass * v0 * v0;
    if (std::isfinite(config.potential->q_limit()) &&
        energy > config.potential->energy(config.potential->q_limit())) {
      throw ConfigError("v0: impact energy for v0=" + format_sci(v0) +
                        " exceeds the potential's attainable range");
    }
  }
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const auto base = std::filesystem::path(path).parent_path();
  return parse_config(document, base.empty() ? "." : base.string());
}

}  // namespace hc
