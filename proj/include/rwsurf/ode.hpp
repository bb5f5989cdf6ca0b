#pragma once

// Moving-frame ODE systems alpha' = A(v) alpha with an (indefinite) Gram
// signature, fixed-step RK4 with eta-Gram-Schmidt, and the warp integrals.

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rwsurf/ambient.hpp"

namespace rwsurf {

/// Scalar function of v with its derivative.
class CoefficientFunction {
 public:
  enum class Family { Constant, Polynomial, Sinusoid, Sampled };

  CoefficientFunction() : CoefficientFunction(constant(0.0)) {}

  static CoefficientFunction constant(double value);
  /// sum_k coeffs[k] v^k
  static CoefficientFunction polynomial(std::vector<double> coeffs);
  /// offset + amplitude sin(frequency v + phase)
  static CoefficientFunction sinusoid(double amplitude, double frequency, double phase = 0.0,
                                      double offset = 0.0);
  /// Piecewise-linear through (knots[i], values[i]); constant beyond the ends.
  static CoefficientFunction sampled(std::vector<double> knots, std::vector<double> values);

  double value(double v) const;
  double derivative(double v) const;
  double operator()(double v) const { return value(v); }

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  const std::vector<double>& knots() const { return knots_; }

 private:
  CoefficientFunction(Family family, std::vector<double> params, std::vector<double> knots = {});

  Family family_;
  std::vector<double> params_;
  std::vector<double> knots_;
};

std::string to_string(CoefficientFunction::Family family);

enum class FrameTemplate { RW0, S3, H3 };
std::string to_string(FrameTemplate tmpl);

struct FrameODESystem {
  FrameTemplate tmpl = FrameTemplate::RW0;
  CoefficientFunction a1;
  CoefficientFunction a2;
  CoefficientFunction a3;
  /// Initial vectors C_1..C_n; for RW0 only the first three slots are used.
  std::vector<FiberVector> initial;
  double v0 = 0.0;
  /// Fixed RK4 step count; 0 selects max(64, ceil(|v - v0| / 0.01)) per call.
  int fixed_steps = 0;
  bool reorthonormalize = true;

  int dimension() const { return tmpl == FrameTemplate::RW0 ? 3 : 4; }
  /// Diagonal of the Gram signature eta.
  Eigen::Vector4d signature() const;
  /// Inner product of the space the vectors live in (E^3, E^4 or E^4_1).
  double inner(const FiberVector& a, const FiberVector& b) const;
  /// alpha_i' = sum_k A(i, k) alpha_k (zero padded to 4x4 for RW0).
  Eigen::Matrix4d coefficient_matrix(double v) const;
  /// max |<C_i, C_j> - eta_ij|.
  double initial_gram_deviation() const;
};

using FrameVectors = std::vector<FiberVector>;

/// eta-orthonormalizes in the order given; throws IntegrationError when a
/// pivot |<r, r>| falls below 1e-12 or has the wrong sign.
void eta_gram_schmidt(const FrameODESystem& sys, FrameVectors& alphas);

/// max |<alpha_i, alpha_j> - eta_ij|.
double gram_deviation(const FrameODESystem& sys, const FrameVectors& alphas);

/// Right-hand side A(v) alpha.
FrameVectors frame_rhs(const FrameODESystem& sys, double v, const FrameVectors& alphas);

/// alpha_1(v)..alpha_n(v) by fixed-step RK4 from v0.
FrameVectors integrate_frame(const FrameODESystem& sys, double v);

enum class WarpSign { Minus, Plus };

/// Integrand a / (f sqrt(a^2 -+ f^2)) of the warp integral.
double warp_integrand(const WarpingFunction& f, double a, WarpSign sign, double u);

/// int_{u0}^{u} a / (f sqrt(a^2 -+ f^2)) by 61-point Gauss-Kronrod on panels
/// of width <= 0.5, a smooth function of u. For
/// WarpSign::Minus, a^2 - f^2 >= margin^2 is required on [u0, u]; a negative
/// margin selects 1e-4 |a|.
double warp_integral(const WarpingFunction& f, double a, WarpSign sign, double u0, double u,
                     double margin = -1.0);

/// The same quadrature without the margin scan.
double warp_quadrature(const WarpingFunction& f, double a, WarpSign sign, double u0, double u);

/// phi_2' = -a1 phi_1, phi_3' = -a2 phi_1 by fixed-step RK4.
std::pair<double, double> phi23_from_ode(const CoefficientFunction& a1,
                                         const CoefficientFunction& a2,
                                         const CoefficientFunction& phi1, double v0, double v,
                                         double phi2_0 = 0.0, double phi3_0 = 0.0,
                                         int fixed_steps = 0);

/// Step count used when `fixed_steps` is 0.
int default_step_count(double span);

}  // namespace rwsurf
