#pragma once
// Family instances shared by the unit and acceptance tests.

#include <cmath>
#include <vector>

#include "rwsurf/families.hpp"

namespace fixtures {

using namespace rwsurf;

inline const double kCoshTheta0 = 1.25;

inline FamilySpec flat_time(FamilyKind kind, double a2 = 0.0) {
  FamilySpec s;
  s.kind = kind;
  s.theta0 = std::acosh(kCoshTheta0);
  s.a1 = CoefficientFunction::constant(1.0);
  s.a2 = CoefficientFunction::constant(a2);
  s.a3 = CoefficientFunction::constant(1.0);
  s.rect = {{-1, 1}, {0, 1}};
  return s;
}

/// f = e^u on (-1, 0.5), a = 2. The ambient has constant curvature, so
/// construction needs ConstructOptions{true}.
inline FamilySpec spacelike_rw0() {
  FamilySpec s;
  s.kind = FamilyKind::SpacelikeRW0;
  s.warping = WarpingFunction::exponential(1.0, 1.0, {-1, 0.5});
  s.a = 2.0;
  s.a1 = CoefficientFunction::constant(1.0);
  s.a2 = CoefficientFunction::constant(1.0);
  s.phi1 = CoefficientFunction::constant(1.0);
  s.u0 = -1.0;
  s.phi2_0 = 2.0;
  s.rect = {{-1, 0.5}, {0, 0.4}};
  return s;
}

/// f(t) = t + 2.
inline FamilySpec timelike_rw0() {
  FamilySpec s;
  s.kind = FamilyKind::TimelikeRW0;
  s.warping = WarpingFunction::polynomial({2, 1}, {-1.5, 5});
  s.a = 1.0;
  s.a1 = CoefficientFunction::constant(1.0);
  s.a2 = CoefficientFunction::constant(1.0);
  s.phi1 = CoefficientFunction::constant(1.0);
  s.u0 = -1.0;
  s.phi2_0 = 1.0;
  s.rect = {{-1, 1}, {0, 0.4}};
  return s;
}

/// I x_cosh alpha with alpha a geodesic circle of radius 0.7 in S^3.
inline FamilySpec product_sphere() {
  FamilySpec s;
  s.kind = FamilyKind::ProductCurve;
  s.warping = WarpingFunction::cosh(1.0, 1.0, {-2, 2});
  s.c = SpaceForm::Spherical;
  s.curve.radius = 0.7;
  s.rect = {{-1, 1}, {0, 3}};
  return s;
}

/// Unit circle in E^3, f = 1.
inline FamilySpec product_unit_circle() {
  FamilySpec s;
  s.kind = FamilyKind::ProductCurve;
  s.warping = WarpingFunction::constant(1.0, {-10, 10});
  s.c = SpaceForm::Euclidean;
  s.curve.radius = 1.0;
  s.rect = {{-1, 1}, {0, 6}};
  return s;
}

struct Named {
  const char* name;
  FamilySpec spec;
};

inline std::vector<Named> all_families() {
  return {{"SpacelikeS3", flat_time(FamilyKind::SpacelikeS3)},
          {"TimelikeS3", flat_time(FamilyKind::TimelikeS3, 0.2)},
          {"SpacelikeH3", flat_time(FamilyKind::SpacelikeH3, 0.2)},
          {"TimelikeH3", flat_time(FamilyKind::TimelikeH3, 0.2)},
          {"SpacelikeRW0", spacelike_rw0()},
          {"TimelikeRW0", timelike_rw0()},
          {"ProductCurve", product_sphere()}};
}

}  // namespace fixtures
