#pragma once
// Run configuration: JSON schema shared by the command-line tool.

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "rwsurf/ambient.hpp"
#include "rwsurf/families.hpp"
#include "rwsurf/ode.hpp"
#include "rwsurf/verify.hpp"

namespace rwsurf {

struct AmbientConfig {
  /// Absent for the flat-time kinds, which fix f = 1 themselves.
  std::optional<WarpingFunction> warping;
  SpaceForm c = SpaceForm::Euclidean;
};

struct OutputConfig {
  std::string dir = ".";
  std::string csv = "mesh.csv";
  /// Empty disables the OBJ export.
  std::string obj;
  std::string report = "report.json";
};

struct RunConfig {
  std::optional<AmbientConfig> ambient;
  std::optional<FamilySpec> family;
  int nu = 33;
  int nv = 33;
  Tolerances tolerances;
  OutputConfig output;
  std::set<std::string> checks;
  std::uint64_t seed = 12345;
  double perturb = 0.0;
  bool allow_constant_curvature = false;

  /// The ambient the run takes place in: the family's when present.
  RobertsonWalker ambient_space() const;
};

nlohmann::json to_json(const WarpingFunction& f);
nlohmann::json to_json(const CoefficientFunction& f);
nlohmann::json to_json(const RunConfig& config);

WarpingFunction warping_from_json(const nlohmann::json& j, const std::string& where = "warping");
CoefficientFunction coefficient_from_json(const nlohmann::json& j, const std::string& where);

/// Throws ConfigError naming the offending key.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// "33x17" -> {33, 17}; throws ConfigError.
std::pair<int, int> parse_grid(const std::string& text);

}  // namespace rwsurf
