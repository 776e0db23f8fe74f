#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relform/geometric.hpp"
#include "relform/group.hpp"

namespace relform::app {

using nlohmann::json;

struct TorusOverride {
  TorusKind kind;
  std::vector<Rational> c0;
};

struct RunConfig {
  long prime_q = 3;
  std::optional<long> epsilon;
  long max_tree_radius_F = kMaxTreeRadiusF;
  long max_tree_radius_E = kMaxTreeRadiusE;
  long n_max = 6;
  long congruence_level_k = 2;
  long anisotropic_shells = 1;
  long random_data = 50;
  std::vector<std::pair<HeckeFunction, HeckeFunction>> pairs;
  std::vector<TorusOverride> torus_instances;
  std::filesystem::path constants_file;
  json canonical;  // normalized config, hashed into every report

  LocalField field() const;
};

/// Throws ConfigError on unknown keys, wrong types or values outside the caps.
RunConfig parse_config(const json& j, const std::filesystem::path& base_dir);
RunConfig load_config(const std::optional<std::filesystem::path>& path);
/// FNV-1a 64 of the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

json hecke_to_json(const HeckeFunction& f);
HeckeFunction hecke_from_json(const json& j, long max_height);
json rational_to_json(const Rational& r);
Rational rational_from_json(const json& j);

struct Constants {
  long prime_q = 0;
  long congruence_level_k = 0;
  long anisotropic_shells = 0;
  Rational anchor_slope;
  Rational anchor_intercept;
  Rational formal_degree;
  Rational c0_M;
  Rational c0_aniso;

  json to_json(const RunConfig& cfg) const;
  static Constants from_json(const json& j);
};

/// Fits d and the two c0 constants on the indicator pair from the exact kernel.
Constants fit_constants(const RunConfig& cfg);
/// Loads the constants file, fitting and writing it first when absent.
Constants ensure_constants(const RunConfig& cfg, std::ostream& log);
/// 0 when written, 3 when a constants file exists and force is false.
int calibrate(const RunConfig& cfg, bool force, std::ostream& log);

/// Torus instances from the sampler settings with the given constants, overridden by the config.
std::vector<SigmaTorusInstance> torus_instances(const RunConfig& cfg, const Constants& k);

struct Check {
  std::string name;
  bool ok = false;
  json detail;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  json data = json::object();
  /// Extra files (name, contents) written next to the JSON report.
  std::vector<std::pair<std::string, std::string>> files;

  bool ok() const;
  void add(std::string name, bool ok, json detail = json::object());
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const RunConfig& cfg, std::ostream& log);

/// Entry point shared by the executable and the tests. Exit codes: 0 pass, 1 check failure,
/// 2 usage or configuration error, 3 calibration refused.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace relform::app
