#pragma once

// Immersions phi(u, v) into L^4_1(f, c): jets, induced metric, adapted
// orthonormal frames, the second fundamental form and relative nullity.

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "rwsurf/ambient.hpp"

namespace rwsurf {

struct ParameterRect {
  Interval u;
  Interval v;
};

/// A parametrized surface. `partials` and `normal_hint` are optional; when
/// `partials` is empty first derivatives are obtained by differencing.
struct Immersion {
  std::function<AmbientPoint(double, double)> point;
  std::function<std::array<AmbientVector, 2>(double, double)> partials;
  /// Reference direction for the normal frame where T spans d/dt (eta = 0).
  std::function<std::optional<AmbientVector>(double, double)> normal_hint;
  ParameterRect domain;
  SpaceForm c = SpaceForm::Euclidean;

  bool has_analytic_partials() const { return static_cast<bool>(partials); }
};

/// Copy of `base` with the analytic partial evaluators dropped.
Immersion without_analytic_partials(Immersion base);

struct SurfaceJet2 {
  AmbientPoint p;
  AmbientVector du;
  AmbientVector dv;
  AmbientVector duu;
  AmbientVector duv;
  AmbientVector dvv;
};

enum class CausalType { Spacelike, Timelike, Degenerate };
std::string to_string(CausalType type);

struct InducedMetric {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;
  CausalType type = CausalType::Degenerate;

  double det() const { return g11 * g22 - g12 * g12; }
};

struct MovingFrame {
  std::array<AmbientVector, 4> e;
  std::array<int, 4> eps{1, 1, 1, 1};
  double theta = 0.0;
  CausalType type = CausalType::Degenerate;
  /// True when e1, e3 follow the d/dt decomposition; false for plain coordinate frames.
  bool adapted = false;
  /// Timelike surface whose d/dt is tangent: e3 came from the hint or fallback rule.
  bool eta_vanishes = false;
};

struct DiffOptions {
  /// Inner differencing step; <= 0 selects max(1e-4, 1e-4 |coordinate|).
  double step = 0.0;
  /// Step for differencing point evaluations twice (pure-differencing jets).
  double second_step = 1e-3;

  double at(double x) const { return step > 0.0 ? step : std::max(1e-4, 1e-4 * std::abs(x)); }
};

/// Point and first partials, analytic when available.
struct FirstJet {
  AmbientPoint p;
  AmbientVector du;
  AmbientVector dv;
};

FirstJet first_jet(const Immersion& immersion, double u, double v, const DiffOptions& opts = {});

/// Second-order jet; second partials are one differencing level over the
/// first partials.
SurfaceJet2 jet(const Immersion& immersion, double u, double v, const DiffOptions& opts = {});

/// Threshold on |det g| below which the metric is treated as degenerate.
inline constexpr double kDegenerateDet = 1e-10;

InducedMetric induced_metric(const RobertsonWalker& rw, const AmbientPoint& p,
                             const AmbientVector& du, const AmbientVector& dv);
inline InducedMetric induced_metric(const RobertsonWalker& rw, const SurfaceJet2& j) {
  return induced_metric(rw, j.p, j.du, j.dv);
}

struct TEtaSplit {
  AmbientVector T;
  AmbientVector eta;
};

/// d/dt = T + eta with T = sum_i eps_i <d/dt, e_i> e_i over the tangent frame.
TEtaSplit t_eta_split(const RobertsonWalker& rw, const AmbientPoint& p, const MovingFrame& frame);

/// Frame with e1 along T (see the README for the sign rules).
MovingFrame adapted_frame(const RobertsonWalker& rw, const FirstJet& j,
                          const std::optional<AmbientVector>& normal_hint = std::nullopt);
inline MovingFrame adapted_frame(const RobertsonWalker& rw, const SurfaceJet2& j,
                                 const std::optional<AmbientVector>& normal_hint = std::nullopt) {
  return adapted_frame(rw, FirstJet{j.p, j.du, j.dv}, normal_hint);
}

/// Orthonormal frame with e1 along phi_u; usable where no adapted frame exists.
MovingFrame coordinate_frame(const RobertsonWalker& rw, const FirstJet& j);

using FrameField = std::function<MovingFrame(double, double)>;

FrameField adapted_frame_field(const RobertsonWalker& rw, const Immersion& immersion,
                               const DiffOptions& opts = {});
FrameField coordinate_frame_field(const RobertsonWalker& rw, const Immersion& immersion,
                                  const DiffOptions& opts = {});

/// Connection data of a frame field at one parameter point.
struct FrameConnection {
  FirstJet jet;
  InducedMetric metric;
  MovingFrame frame;
  /// e_i = coeffs[i][0] phi_u + coeffs[i][1] phi_v for i = 0, 1.
  std::array<std::array<double, 2>, 2> coeffs{};
  /// nabla[i][j] = nabla_{e_i} e_j for i in {0, 1}, j in {0..3}.
  std::array<std::array<AmbientVector, 4>, 2> nabla;
  /// gamma[i][j][k] = <nabla_{e_i} e_j, e_k>.
  std::array<std::array<std::array<double, 4>, 4>, 2> gamma{};
  /// e_i(theta).
  std::array<double, 2> dtheta{};
};

FrameConnection frame_connection(const RobertsonWalker& rw, const Immersion& immersion,
                                 const FrameField& frames, double u, double v,
                                 const DiffOptions& opts = {});

struct FundamentalForms {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;
  /// h[alpha - 3](i, j): frame components, h(e_i, e_j) = sum_alpha h^alpha_ij e_alpha.
  std::array<Eigen::Matrix2d, 2> h{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
  AmbientVector T;
  AmbientVector eta;
  MovingFrame frame;
};

FundamentalForms second_fundamental_form(const RobertsonWalker& rw, const FrameConnection& fc);
FundamentalForms second_fundamental_form(const RobertsonWalker& rw, const Immersion& immersion,
                                         double u, double v, const FrameField& frames,
                                         const DiffOptions& opts = {});

/// h on coordinate fields from the Gauss formula applied to second partials.
struct CoordinateForms {
  AmbientVector huu;
  AmbientVector huv;
  AmbientVector hvv;
};

CoordinateForms coordinate_second_fundamental_form(const RobertsonWalker& rw,
                                                   const SurfaceJet2& j);

/// Matrix of A_{e_alpha} acting on frame coefficients: A e_i = sum_j M(j, i) e_j.
Eigen::Matrix2d shape_operator(const FundamentalForms& forms, int alpha);

/// Dimension of the relative null space by singular-value thresholding.
int relative_nullity_dim(const FundamentalForms& forms, double tol = 1e-6, double tol_abs = 1e-10);
int relative_nullity_dim(const std::array<Eigen::Matrix2d, 2>& h, double tol = 1e-6,
                         double tol_abs = 1e-10);

/// H = 1/2 sum_i eps_i h(e_i, e_i).
AmbientVector mean_curvature_vector(const FundamentalForms& forms);

/// Helpers shared with the verification kernels.
AmbientVector gram_schmidt_step(const RobertsonWalker& rw, const AmbientPoint& p, AmbientVector v,
                                const AmbientVector* basis, const int* eps, int count);
/// Solves g [a; b] = [<x, phi_u>; <x, phi_v>] for a tangent vector x.
std::array<double, 2> tangent_coefficients(const RobertsonWalker& rw, const FirstJet& j,
                                           const InducedMetric& g, const AmbientVector& x);

}  // namespace rwsurf
