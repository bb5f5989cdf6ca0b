#pragma once

// Grid-based numeric checkers: relative nullity, frame equations, theta laws,
// Codazzi and Ricci identities, closed-form comparisons and ambient oracles.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rwsurf/families.hpp"
#include "rwsurf/surface.hpp"

namespace rwsurf {

struct Grid {
  int nu = 33;
  int nv = 33;
  ParameterRect rect;

  double u(int i) const { return nu == 1 ? rect.u.mid() : rect.u.lo + rect.u.length() * i / (nu - 1); }
  double v(int j) const { return nv == 1 ? rect.v.mid() : rect.v.lo + rect.v.length() * j / (nv - 1); }
};

/// Margin that keeps every stencil of the battery inside the domain.
double default_grid_margin(const ParameterRect& domain, const DiffOptions& opts = {},
                           double codazzi_step = 1e-3);

/// nu x nv grid over `domain` shrunk by `margin` on every side (negative
/// selects default_grid_margin).
Grid make_grid(const ParameterRect& domain, int nu = 33, int nv = 33, double margin = -1.0);

struct Tolerances {
  double prn = 1e-6;
  /// Added to ||h(e2, e2)|| in the PRN ratio.
  double prn_floor = 1e-3;
  double frame = 1e-5;
  double theta = 1e-6;
  /// Fitted theta0 against the expected value.
  double theta0_fit = 1e-8;
  double codazzi = 1e-4;
  double codazzi_step = 1e-3;
  double closed_form = 1e-5;
  double closed_form_differenced = 1e-4;
  double ricci = 1e-6;
  double curvature = 1e-4;
  double compatibility = 1e-6;
  double torsion = 1e-6;
  double nullity_rel = 1e-6;
  double nullity_abs = 1e-10;
  double mesh_prn = 1e-3;
  double mesh_theta = 1e-4;

  /// Every tolerance replaced by `tol` (the step and floor settings are kept).
  Tolerances with_global(double tol) const;
};

struct CheckResult {
  std::string name;
  int nu = 0;
  int nv = 0;
  int evaluated = 0;
  std::map<std::string, int> skipped;
  double max_residual = 0.0;
  std::optional<std::pair<double, double>> argmax;
  double tolerance = 0.0;
  bool pass = false;
  /// Set when the check could not run at all.
  std::string error;
  nlohmann::json extras = nlohmann::json::object();

  void record(double residual, double u, double v);
  void skip(const std::string& reason) { ++skipped[reason]; }
  int skipped_total() const;
  /// pass = no error, at least one evaluated point and max residual <= tolerance.
  void finalize();
  nlohmann::json to_json() const;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> conventions;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Frame connection and forms at one grid node, or the reason they are missing.
struct PointSample {
  double u = 0.0;
  double v = 0.0;
  std::string status = "ok";  // ok | degenerate | horizontal | frame | domain | error
  std::string message;
  AmbientPoint p;
  std::optional<FrameConnection> fc;
  FundamentalForms forms;

  bool ok() const { return status == "ok"; }
};

struct SampleSet {
  Grid grid;
  std::vector<PointSample> points;
};

SampleSet sample_grid(const RobertsonWalker& rw, const Immersion& immersion,
                      const FrameField& frames, const Grid& grid, const DiffOptions& opts = {});

/// Forms from the coordinate Gauss formula h_ab and a frame at the point.
FundamentalForms forms_from_coordinate(const RobertsonWalker& rw, const SurfaceJet2& jet,
                                       const MovingFrame& frame);

/// Nodal surface samples (row-major in u, then v) as read from a mesh.
struct MeshGrid {
  std::vector<double> us;
  std::vector<double> vs;
  std::vector<AmbientPoint> points;

  const AmbientPoint& at(int i, int j) const { return points[i * vs.size() + j]; }
};

/// Sixth-order finite differences on interior nodes (three-node margin);
/// boundary nodes are skipped as "boundary".
SampleSet sample_mesh(const RobertsonWalker& rw, const MeshGrid& mesh);

CheckResult check_prn(const SampleSet& samples, const Tolerances& tol = {});
CheckResult check_frame_equations(const RobertsonWalker& rw, const SampleSet& samples,
                                  const Tolerances& tol = {});
/// Fits a (or theta0 when f is constant); `expected` adds a fit-error test.
CheckResult check_theta_law(const RobertsonWalker& rw, const SampleSet& samples,
                            const Tolerances& tol = {},
                            std::optional<double> expected = std::nullopt);
CheckResult check_codazzi(const RobertsonWalker& rw, const Immersion& immersion,
                          const FrameField& frames, const SampleSet& samples,
                          const Tolerances& tol = {}, const DiffOptions& opts = {});
/// Frobenius norm of [A_3, A_4].
double ricci_commutator_norm(const FundamentalForms& forms);
CheckResult check_ricci_flatness_consistency(const SampleSet& samples, const Tolerances& tol = {});
CheckResult compare_closed_form(const FamilySpec& spec, const SampleSet& samples, double tol);

/// Closed-form curvature against second-order connection differencing on
/// random coordinate fields.
CheckResult check_curvature_lemma(const RobertsonWalker& rw, int samples = 100,
                                  std::uint64_t seed = 12345, const Tolerances& tol = {});
CheckResult check_metric_compatibility(const RobertsonWalker& rw, int samples = 100,
                                       std::uint64_t seed = 12345, const Tolerances& tol = {});
CheckResult check_torsion(const RobertsonWalker& rw, int samples = 100,
                          std::uint64_t seed = 12345, const Tolerances& tol = {});

struct BatteryOptions {
  Tolerances tol;
  /// Empty runs every applicable check.
  std::set<std::string> checks;
  std::uint64_t seed = 12345;
  int oracle_samples = 100;
  DiffOptions diff;
  /// Frame used when the adapted one does not exist anywhere (horizontal surfaces).
  bool coordinate_frames = false;
};

/// Value the theta law should fit: |a| (RW0 kinds), |theta0| (flat-time kinds),
/// 0 (product kind).
double theta_fit_target(const FamilySpec& spec);

/// Names accepted in BatteryOptions::checks.
const std::vector<std::string>& battery_check_names();

/// Runs the selected checks. `spec` enables the theta fit target and the
/// closed-form comparison.
VerificationReport run_battery(const RobertsonWalker& rw, const Immersion& immersion,
                               const Grid& grid, const BatteryOptions& opts,
                               const std::optional<FamilySpec>& spec = std::nullopt);

}  // namespace rwsurf
