#pragma once

// Constructors for the classified families of surfaces with positive relative
// nullity, their closed-form invariants, and admissibility diagnostics.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwsurf/ambient.hpp"
#include "rwsurf/ode.hpp"
#include "rwsurf/surface.hpp"

namespace rwsurf {

enum class FamilyKind {
  SpacelikeRW0,
  TimelikeRW0,
  ProductCurve,
  SpacelikeS3,
  TimelikeS3,
  SpacelikeH3,
  TimelikeH3
};

std::string to_string(FamilyKind kind);
/// Throws ConfigError for unknown names.
FamilyKind family_kind_from_string(const std::string& name);

bool is_rw0(FamilyKind kind);
bool is_flat_time(FamilyKind kind);  // the E^1_1 x S^3 and E^1_1 x H^3 kinds
bool is_timelike_kind(FamilyKind kind);

/// Fiber curve of a product surface I x_f alpha.
struct CurveSpec {
  enum class Type { Circle, Sampled };
  Type type = Type::Circle;
  /// Circle: radius in E^3, geodesic radius in S^3 / H^3. Unit speed.
  double radius = 1.0;
  /// Sampled: points at s = s0 + k ds (4-vectors, slot 3 unused for c = 0),
  /// interpolated by cubic B-splines and projected onto the model.
  std::vector<FiberVector> samples;
  double s0 = 0.0;
  double ds = 1.0;
};

struct FamilySpec {
  FamilyKind kind = FamilyKind::SpacelikeS3;
  /// Warping of the ambient (RW0 and product kinds); the flat-time kinds use f = 1.
  std::optional<WarpingFunction> warping;
  /// Fiber of the product kind; the other kinds fix c themselves.
  SpaceForm c = SpaceForm::Euclidean;
  double a = 0.0;
  double theta0 = 0.0;
  CoefficientFunction a1;
  CoefficientFunction a2;
  CoefficientFunction a3;
  CoefficientFunction phi1;
  double phi2_0 = 0.0;
  double phi3_0 = 0.0;
  CurveSpec curve;
  /// Initial frame C_1..C_n; empty selects the standard basis.
  std::vector<FiberVector> initial;
  double u0 = 0.0;
  double v0 = 0.0;
  ParameterRect rect;
};

/// Space form the family lives in.
SpaceForm fiber_of(const FamilySpec& spec);

/// The ambient L^4_1(f, c) of the family.
RobertsonWalker ambient_for(const FamilySpec& spec);

/// Frame ODE system with the standard basis filled in when `initial` is empty.
FrameODESystem frame_system(const FamilySpec& spec);

struct Diagnostic {
  std::string code;
  std::string message;
  std::optional<double> at_u;
  std::optional<double> at_v;
};

/// Violations of the family's hypotheses; empty when admissible.
std::vector<Diagnostic> validate_spec(const FamilySpec& spec, int samples = 1001);

class InadmissibleSpecError : public std::runtime_error {
 public:
  explicit InadmissibleSpecError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct ConstructOptions {
  /// Accept RW0 kinds over a constant-curvature ambient (defect identically 0).
  bool allow_constant_curvature = false;
};

/// Immersion with analytic first partials. Throws InadmissibleSpecError.
Immersion construct(const FamilySpec& spec, const ConstructOptions& opts = {});

/// Closed-form (omega, h^3_22, h^4_22) with h^alpha_22 = <h(e2, e2), e_alpha>.
struct PredictedInvariants {
  double omega = 0.0;
  double h3 = 0.0;
  double h4 = 0.0;
};

/// Throws SingularPointError where a denominator falls below 1e-10.
PredictedInvariants predicted_invariants(const FamilySpec& spec, double u, double v);

/// phi + eps sin(u) e4, with e4 from the adapted frame of the base surface.
/// The result carries no analytic partials.
Immersion perturb_along_normal(const RobertsonWalker& rw, const Immersion& base, double eps);

}  // namespace rwsurf
