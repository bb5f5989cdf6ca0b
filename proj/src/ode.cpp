#include "rwsurf/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rwsurf/errors.hpp"

namespace rwsurf {

CoefficientFunction::CoefficientFunction(Family family, std::vector<double> params,
                                         std::vector<double> knots)
    : family_(family), params_(std::move(params)), knots_(std::move(knots)) {}

CoefficientFunction CoefficientFunction::constant(double value) {
  return CoefficientFunction(Family::Constant, {value});
}

CoefficientFunction CoefficientFunction::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  return CoefficientFunction(Family::Polynomial, std::move(coeffs));
}

CoefficientFunction CoefficientFunction::sinusoid(double amplitude, double frequency,
                                                  double phase, double offset) {
  return CoefficientFunction(Family::Sinusoid, {amplitude, frequency, phase, offset});
}

CoefficientFunction CoefficientFunction::sampled(std::vector<double> knots,
                                                 std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2) {
    throw ConfigError("sampled coefficient needs matching knots and values (at least 2)");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1])) throw ConfigError("sampled coefficient knots must increase");
  }
  return CoefficientFunction(Family::Sampled, std::move(values), std::move(knots));
}

double CoefficientFunction::value(double v) const {
  switch (family_) {
    case Family::Constant: return params_[0];
    case Family::Polynomial: {
      double acc = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) acc = acc * v + *it;
      return acc;
    }
    case Family::Sinusoid:
      return params_[3] + params_[0] * std::sin(params_[1] * v + params_[2]);
    case Family::Sampled: {
      if (v <= knots_.front()) return params_.front();
      if (v >= knots_.back()) return params_.back();
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), v);
      const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
      const double s = (v - knots_[i]) / (knots_[i + 1] - knots_[i]);
      return (1.0 - s) * params_[i] + s * params_[i + 1];
    }
  }
  return 0.0;
}

double CoefficientFunction::derivative(double v) const {
  switch (family_) {
    case Family::Constant: return 0.0;
    case Family::Polynomial: {
      double acc = 0.0;
      for (std::size_t k = params_.size(); k-- > 1;) acc = acc * v + k * params_[k];
      return acc;
    }
    case Family::Sinusoid:
      return params_[0] * params_[1] * std::cos(params_[1] * v + params_[2]);
    case Family::Sampled: {
      if (v < knots_.front() || v > knots_.back()) return 0.0;
      auto it = std::upper_bound(knots_.begin(), knots_.end(), v);
      if (it == knots_.end()) --it;
      const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
      return (params_[i + 1] - params_[i]) / (knots_[i + 1] - knots_[i]);
    }
  }
  return 0.0;
}

std::string to_string(CoefficientFunction::Family family) {
  switch (family) {
    case CoefficientFunction::Family::Constant: return "constant";
    case CoefficientFunction::Family::Polynomial: return "polynomial";
    case CoefficientFunction::Family::Sinusoid: return "sinusoid";
    case CoefficientFunction::Family::Sampled: return "sampled";
  }
  return "unknown";
}

std::string to_string(FrameTemplate tmpl) {
  switch (tmpl) {
    case FrameTemplate::RW0: return "RW0";
    case FrameTemplate::S3: return "S3";
    case FrameTemplate::H3: return "H3";
  }
  return "unknown";
}

Eigen::Vector4d FrameODESystem::signature() const {
  if (tmpl == FrameTemplate::H3) return Eigen::Vector4d(-1.0, 1.0, 1.0, 1.0);
  return Eigen::Vector4d::Ones();
}

double FrameODESystem::inner(const FiberVector& a, const FiberVector& b) const {
  switch (tmpl) {
    case FrameTemplate::RW0: return a.head<3>().dot(b.head<3>());
    case FrameTemplate::S3: return a.dot(b);
    case FrameTemplate::H3: return embedding_inner(SpaceForm::Hyperbolic, a, b);
  }
  return 0.0;
}

Eigen::Matrix4d FrameODESystem::coefficient_matrix(double v) const {
  const double c1 = a1(v), c2 = a2(v);
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  switch (tmpl) {
    case FrameTemplate::RW0:
      A(0, 1) = c1;
      A(0, 2) = c2;
      A(1, 0) = -c1;
      A(2, 0) = -c2;
      break;
    case FrameTemplate::S3:
    case FrameTemplate::H3: {
      const double c3 = a3(v);
      A(0, 2) = c1;
      A(1, 2) = c2;
      A(2, 0) = tmpl == FrameTemplate::S3 ? -c1 : c1;
      A(2, 1) = -c2;
      A(2, 3) = c3;
      A(3, 2) = -c3;
      break;
    }
  }
  return A;
}

double FrameODESystem::initial_gram_deviation() const {
  if (static_cast<int>(initial.size()) != dimension()) return INFINITY;
  return gram_deviation(*this, initial);
}

double gram_deviation(const FrameODESystem& sys, const FrameVectors& alphas) {
  const Eigen::Vector4d eta = sys.signature();
  double worst = 0.0;
  const int n = sys.dimension();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double target = i == j ? eta[i] : 0.0;
      worst = std::max(worst, std::abs(sys.inner(alphas[i], alphas[j]) - target));
    }
  }
  return worst;
}

void eta_gram_schmidt(const FrameODESystem& sys, FrameVectors& alphas) {
  const Eigen::Vector4d eta = sys.signature();
  const int n = sys.dimension();
  for (int i = 0; i < n; ++i) {
    FiberVector r = alphas[i];
    for (int k = 0; k < i; ++k) r -= (eta[k] * sys.inner(alphas[i], alphas[k])) * alphas[k];
    const double q = sys.inner(r, r);
    if (!(q * eta[i] > 1e-12)) {
      std::ostringstream os;
      os << "eta-Gram-Schmidt breakdown at vector " << (i + 1) << " (pivot " << q << ")";
      throw IntegrationError(os.str());
    }
    alphas[i] = r / std::sqrt(std::abs(q));
  }
}

FrameVectors frame_rhs(const FrameODESystem& sys, double v, const FrameVectors& alphas) {
  const Eigen::Matrix4d A = sys.coefficient_matrix(v);
  const int n = sys.dimension();
  FrameVectors out(n, FiberVector::Zero());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (A(i, k) != 0.0) out[i] += A(i, k) * alphas[k];
    }
  }
  return out;
}

int default_step_count(double span) {
  return std::max(64, static_cast<int>(std::ceil(std::abs(span) / 0.01)));
}

namespace {

FrameVectors axpy(const FrameVectors& x, double s, const FrameVectors& d) {
  FrameVectors out = x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * d[i];
  return out;
}

}  // namespace

FrameVectors integrate_frame(const FrameODESystem& sys, double v) {
  const int n = sys.dimension();
  if (static_cast<int>(sys.initial.size()) != n) {
    throw IntegrationError("frame system needs " + std::to_string(n) + " initial vectors");
  }
  FrameVectors y = sys.initial;
  if (v == sys.v0) return y;
  const int steps = sys.fixed_steps > 0 ? sys.fixed_steps : default_step_count(v - sys.v0);
  const double h = (v - sys.v0) / steps;
  for (int s = 0; s < steps; ++s) {
    const double x = sys.v0 + s * h;
    const FrameVectors k1 = frame_rhs(sys, x, y);
    const FrameVectors k2 = frame_rhs(sys, x + 0.5 * h, axpy(y, 0.5 * h, k1));
    const FrameVectors k3 = frame_rhs(sys, x + 0.5 * h, axpy(y, 0.5 * h, k2));
    const FrameVectors k4 = frame_rhs(sys, x + h, axpy(y, h, k3));
    for (int i = 0; i < n; ++i) y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (sys.reorthonormalize) eta_gram_schmidt(sys, y);
  }
  return y;
}

double warp_integrand(const WarpingFunction& f, double a, WarpSign sign, double u) {
  const double fu = f.value(u);
  const double inside = sign == WarpSign::Minus ? a * a - fu * fu : a * a + fu * fu;
  return a / (fu * std::sqrt(inside));
}

double warp_integral(const WarpingFunction& f, double a, WarpSign sign, double u0, double u,
                     double margin) {
  if (u == u0) return 0.0;
  if (sign == WarpSign::Minus) {
    const double m = margin < 0.0 ? 1e-4 * std::abs(a) : margin;
    const int samples = 257;
    for (int i = 0; i <= samples; ++i) {
      const double s = u0 + (u - u0) * i / samples;
      const double fs = f.value(s);
      if (a * a - fs * fs < m * m) {
        std::ostringstream os;
        os << "a^2 - f^2 falls below the margin at u=" << s << " (a=" << a << ", f=" << fs << ")";
        throw DomainError(os.str());
      }
    }
  }
  return warp_quadrature(f, a, sign, u0, u);
}

double warp_quadrature(const WarpingFunction& f, double a, WarpSign sign, double u0, double u) {
  if (u == u0) return 0.0;
  const double lo = std::min(u0, u), hi = std::max(u0, u);
  auto g = [&](double s) { return warp_integrand(f, a, sign, s); };
  // Fixed panels keep the result a smooth function of the endpoint, which the
  // differenced jets rely on; adaptive refinement would not.
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.5)));
  const double w = (hi - lo) / panels;
  double value = 0.0;
  for (int k = 0; k < panels; ++k) {
    value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, lo + k * w,
                                                                          lo + (k + 1) * w, 0);
  }
  return u >= u0 ? value : -value;
}

std::pair<double, double> phi23_from_ode(const CoefficientFunction& a1,
                                         const CoefficientFunction& a2,
                                         const CoefficientFunction& phi1, double v0, double v,
                                         double phi2_0, double phi3_0, int fixed_steps) {
  if (v == v0) return {phi2_0, phi3_0};
  const int steps = fixed_steps > 0 ? fixed_steps : default_step_count(v - v0);
  const double h = (v - v0) / steps;
  // The right-hand side does not depend on (phi_2, phi_3), so RK4 reduces to
  // Simpson's rule on each step.
  auto rhs = [&](double x) {
    const double p = phi1(x);
    return std::pair<double, double>{-a1(x) * p, -a2(x) * p};
  };
  double p2 = phi2_0, p3 = phi3_0;
  for (int s = 0; s < steps; ++s) {
    const double x = v0 + s * h;
    const auto k1 = rhs(x);
    const auto k2 = rhs(x + 0.5 * h);
    const auto k4 = rhs(x + h);
    p2 += (h / 6.0) * (k1.first + 4.0 * k2.first + k4.first);
    p3 += (h / 6.0) * (k1.second + 4.0 * k2.second + k4.second);
  }
  return {p2, p3};
}

}  // namespace rwsurf
