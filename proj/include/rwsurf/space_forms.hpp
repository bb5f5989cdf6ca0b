#pragma once

// Unit space forms R^3(c) in their embedded models:
//   c =  0 : E^3, stored in the first three slots of a 4-vector (slot 3 is zero),
//   c = +1 : the unit sphere S^3 in E^4,
//   c = -1 : the upper sheet of the unit hyperboloid H^3 in E^4_1 (x1 > 0).

#include <string>

#include <Eigen/Core>

namespace rwsurf {

enum class SpaceForm : int { Hyperbolic = -1, Euclidean = 0, Spherical = 1 };

using FiberVector = Eigen::Vector4d;

inline double curvature(SpaceForm c) { return static_cast<double>(static_cast<int>(c)); }
inline int fiber_dimension(SpaceForm c) { return c == SpaceForm::Euclidean ? 3 : 4; }

/// "E3", "S3" or "H3".
std::string to_string(SpaceForm c);

/// Throws ConfigError unless c is -1, 0 or 1.
SpaceForm space_form_from_int(int c);

struct FiberPoint {
  SpaceForm c = SpaceForm::Euclidean;
  FiberVector x = FiberVector::Zero();
};

/// Inner product of the flat embedding space: Euclidean for c in {0, 1},
/// Minkowski (-x1 y1 + x2 y2 + x3 y3 + x4 y4) for c = -1.
double embedding_inner(SpaceForm c, const FiberVector& a, const FiberVector& b);

/// Deviation of x from the model constraint (0 for c = 0 unless slot 3 is used).
double model_residual(SpaceForm c, const FiberVector& x);

/// Builds a point and checks the model constraint to `tol`.
FiberPoint make_fiber_point(SpaceForm c, const FiberVector& x, double tol = 1e-12);

/// Radial normalization back onto the model (identity for c = 0).
FiberVector project_to_model(SpaceForm c, const FiberVector& x);

/// Induced metric g_c on T_x R^3(c). Throws TangencyError when either vector
/// has a normal component above `tol` (relative to its size).
double fiber_inner(const FiberPoint& x, const FiberVector& w1, const FiberVector& w2,
                   double tol = 1e-9);

/// Removes the component of w along the position normal.
FiberVector fiber_tangent_project(const FiberPoint& x, const FiberVector& w);

/// c <w1, w2> x: the term that turns the flat derivative D into the
/// Levi-Civita connection of the model, nabla_{w1} W = D_{w1} W + c <w1, W> x.
FiberVector fiber_connection_correction(const FiberPoint& x, const FiberVector& w1,
                                        const FiberVector& w2);

}  // namespace rwsurf
