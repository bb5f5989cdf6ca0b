#pragma once
// Subcommands of the rwsurf tool. Exit codes: 0 pass, 1 check failure,
// 2 invalid or inadmissible configuration.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include <json.hpp>

#include "rwsurf/config.hpp"

namespace rwsurf {

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitInvalidConfig = 2 };

struct CliOptions {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::pair<int, int>> grid;
  std::optional<double> tol;
  std::optional<double> perturb;
  std::optional<std::set<std::string>> checks;
  std::optional<std::uint64_t> seed;
  /// verify: check a CSV mesh instead of the constructed immersion.
  std::optional<std::string> mesh;
  bool allow_constant_curvature = false;
};

/// Config from disk with command-line overrides applied.
RunConfig resolve_config(const CliOptions& opts);

int cmd_construct(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const CliOptions& opts, std::ostream& out, std::ostream& err);
int cmd_ambient_check(const CliOptions& opts, std::ostream& out, std::ostream& err);

struct AmbientScan {
  Interval range;
  int samples = 0;
  /// Maximal runs of vanishing samples (length >= 3 means an open set).
  std::vector<Interval> vanishing_runs;
  /// Isolated zeros located by bracketing sign changes or single hits.
  std::vector<double> roots;
  int sign_changes = 0;
  bool vanishes_everywhere = false;
  bool vanishes_on_open_set = false;
  std::string verdict;

  nlohmann::json to_json() const;
};

/// Scaled constant-curvature defect sampled at `samples` points of the
/// warping interval; values with magnitude <= tol count as zero.
AmbientScan scan_ambient(const RobertsonWalker& rw, int samples = 2001, double tol = 1e-12);

}  // namespace rwsurf
