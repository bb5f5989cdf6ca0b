#pragma once

// The Robertson-Walker space-time L^4_1(f, c) = I x_f R^3(c) with metric
// -dt^2 + f(t)^2 g_c, its Levi-Civita connection and curvature tensor.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rwsurf/space_forms.hpp"

namespace rwsurf {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closed(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Closed family of analytic warping functions with hand-coded derivatives.
class WarpingFunction {
 public:
  enum class Family { Constant, Exponential, Cosh, Polynomial, PowerShifted };

  struct Jet {
    double f;
    double df;
    double d2f;
  };

  static WarpingFunction constant(double value, Interval domain);
  /// amplitude * exp(rate * t)
  static WarpingFunction exponential(double amplitude, double rate, Interval domain);
  /// amplitude * cosh(rate * t)
  static WarpingFunction cosh(double amplitude, double rate, Interval domain);
  /// sum_k coeffs[k] t^k
  static WarpingFunction polynomial(std::vector<double> coeffs, Interval domain);
  /// amplitude * (t + shift)^power
  static WarpingFunction power_shifted(double amplitude, double shift, double power,
                                       Interval domain);

  Jet jet(double t) const;
  double value(double t) const { return jet(t).f; }
  double first(double t) const { return jet(t).df; }
  double second(double t) const { return jet(t).d2f; }

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const Interval& domain() const { return domain_; }

  /// Non-vanishing on a dense grid and derivative consistency against central
  /// differences; returns human-readable violations (empty when valid).
  std::vector<std::string> validate(int samples = 2001) const;

 private:
  WarpingFunction(Family family, std::vector<double> params, Interval domain);

  Family family_;
  std::vector<double> params_;
  Interval domain_;
};

std::string to_string(WarpingFunction::Family family);

struct AmbientPoint {
  double t = 0.0;
  FiberPoint fiber;
};

/// X = X_0 d/dt + Xbar, Xbar stored in embedding coordinates of the fiber.
struct AmbientVector {
  double t0 = 0.0;
  FiberVector bar = FiberVector::Zero();

  static AmbientVector d_dt() { return AmbientVector{1.0, FiberVector::Zero()}; }
  static AmbientVector from_packed(const Eigen::Matrix<double, 5, 1>& v);
  Eigen::Matrix<double, 5, 1> packed() const;

  AmbientVector& operator+=(const AmbientVector& o) {
    t0 += o.t0;
    bar += o.bar;
    return *this;
  }
  AmbientVector& operator-=(const AmbientVector& o) {
    t0 -= o.t0;
    bar -= o.bar;
    return *this;
  }
  AmbientVector& operator*=(double s) {
    t0 *= s;
    bar *= s;
    return *this;
  }
  double max_abs() const { return std::max(std::abs(t0), bar.cwiseAbs().maxCoeff()); }
};

inline AmbientVector operator+(AmbientVector a, const AmbientVector& b) { return a += b; }
inline AmbientVector operator-(AmbientVector a, const AmbientVector& b) { return a -= b; }
inline AmbientVector operator-(AmbientVector a) { return a *= -1.0; }
inline AmbientVector operator*(double s, AmbientVector a) { return a *= s; }
inline AmbientVector operator*(AmbientVector a, double s) { return a *= s; }

class RobertsonWalker {
 public:
  RobertsonWalker(WarpingFunction f, SpaceForm c);

  const WarpingFunction& warping() const { return f_; }
  SpaceForm space_form() const { return c_; }

  /// -X0 Y0 + f(t)^2 g_c(Xbar, Ybar). Vectors are assumed carried at p.
  double metric(const AmbientPoint& p, const AmbientVector& x, const AmbientVector& y) const;

  /// Levi-Civita derivative of a field Y along a curve with velocity x, given
  /// the flat coordinate derivative dy = dY/ds at the same parameter.
  AmbientVector connection(const AmbientPoint& p, const AmbientVector& x, const AmbientVector& y,
                           const AmbientVector& dy) const;

  /// nabla_{gamma'(s)} V by fourth-order central differencing of gamma and V.
  AmbientVector covariant_derivative(const std::function<AmbientPoint(double)>& curve,
                                     const std::function<AmbientVector(double)>& field, double s,
                                     double step = 0.0) const;

  /// Closed-form R(X, Y) Z with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
  AmbientVector curvature(const AmbientPoint& p, const AmbientVector& x, const AmbientVector& y,
                          const AmbientVector& z) const;

  /// f''/f - (f'^2 + c)/f^2; zero exactly where the ambient has constant curvature.
  double constant_curvature_defect(double t) const;

  /// The defect divided by max(1, |f''/f|, |(f'^2 + c)/f^2|), so a single
  /// absolute threshold decides whether it vanishes.
  double scaled_curvature_defect(double t) const;

  /// Sectional curvature of vertical planes, (f'^2 + c)/f^2.
  double vertical_curvature(double t) const;

  /// Re-projects the bar component onto T_x R^3(c).
  AmbientVector tangent_project(const AmbientPoint& p, const AmbientVector& x) const;

  /// Normal of the product I x R^3(c) inside R x E^4 (zero bar for c = 0);
  /// used only to orient 4-frames.
  Eigen::Matrix<double, 5, 1> model_normal(const AmbientPoint& p) const;

 private:
  WarpingFunction f_;
  SpaceForm c_;
};

}  // namespace rwsurf
