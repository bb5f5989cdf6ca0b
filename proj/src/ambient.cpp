#include "rwsurf/ambient.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"

namespace rwsurf {

WarpingFunction::WarpingFunction(Family family, std::vector<double> params, Interval domain)
    : family_(family), params_(std::move(params)), domain_(domain) {
  if (!(domain_.lo < domain_.hi)) throw ConfigError("warping interval must satisfy lo < hi");
}

WarpingFunction WarpingFunction::constant(double value, Interval domain) {
  return WarpingFunction(Family::Constant, {value}, domain);
}

WarpingFunction WarpingFunction::exponential(double amplitude, double rate, Interval domain) {
  return WarpingFunction(Family::Exponential, {amplitude, rate}, domain);
}

WarpingFunction WarpingFunction::cosh(double amplitude, double rate, Interval domain) {
  return WarpingFunction(Family::Cosh, {amplitude, rate}, domain);
}

WarpingFunction WarpingFunction::polynomial(std::vector<double> coeffs, Interval domain) {
  if (coeffs.empty()) throw ConfigError("polynomial warping needs at least one coefficient");
  return WarpingFunction(Family::Polynomial, std::move(coeffs), domain);
}

WarpingFunction WarpingFunction::power_shifted(double amplitude, double shift, double power,
                                               Interval domain) {
  return WarpingFunction(Family::PowerShifted, {amplitude, shift, power}, domain);
}

WarpingFunction::Jet WarpingFunction::jet(double t) const {
  switch (family_) {
    case Family::Constant: return {params_[0], 0.0, 0.0};
    case Family::Exponential: {
      const double a = params_[0], k = params_[1];
      const double e = a * std::exp(k * t);
      return {e, k * e, k * k * e};
    }
    case Family::Cosh: {
      const double a = params_[0], k = params_[1];
      const double ch = a * std::cosh(k * t), sh = a * std::sinh(k * t);
      return {ch, k * sh, k * k * ch};
    }
    case Family::Polynomial: {
      // Horner for the value and both derivatives.
      double p = 0.0, dp = 0.0, d2p = 0.0;
      for (auto it = params_.rbegin(); it != params_.rend(); ++it) {
        d2p = d2p * t + 2.0 * dp;
        dp = dp * t + p;
        p = p * t + *it;
      }
      return {p, dp, d2p};
    }
    case Family::PowerShifted: {
      const double a = params_[0], s = params_[1], q = params_[2];
      const double x = t + s;
      if (x <= 0.0) throw DomainError("power-shifted warping evaluated at t + shift <= 0");
      const double xq = std::pow(x, q);
      return {a * xq, a * q * xq / x, a * q * (q - 1.0) * xq / (x * x)};
    }
  }
  return {0.0, 0.0, 0.0};
}

std::vector<std::string> WarpingFunction::validate(int samples) const {
  std::vector<std::string> out;
  if (samples < 2) samples = 2;
  const double h = 1e-4 * std::max(1.0, domain_.length());
  for (int i = 0; i < samples; ++i) {
    const double t = domain_.lo + (domain_.hi - domain_.lo) * (i + 0.5) / samples;
    Jet j{};
    try {
      j = jet(t);
    } catch (const GeometryError& e) {
      out.push_back(std::string("warping undefined at t=") + std::to_string(t) + ": " + e.what());
      return out;
    }
    if (!(std::abs(j.f) >= 1e-9)) {
      std::ostringstream os;
      os << "warping function vanishes at t=" << t;
      out.push_back(os.str());
      return out;
    }
    if (t - 2 * h > domain_.lo && t + 2 * h < domain_.hi) {
      const double df = numdiff::central4([&](double s) { return value(s); }, t, h);
      const double d2f = numdiff::central4([&](double s) { return first(s); }, t, h);
      const double scale = 1.0 + std::abs(j.f) + std::abs(j.df) + std::abs(j.d2f);
      if (std::abs(df - j.df) > 1e-6 * scale || std::abs(d2f - j.d2f) > 1e-6 * scale) {
        std::ostringstream os;
        os << "warping derivatives inconsistent at t=" << t;
        out.push_back(os.str());
        return out;
      }
    }
  }
  return out;
}

std::string to_string(WarpingFunction::Family family) {
  switch (family) {
    case WarpingFunction::Family::Constant: return "constant";
    case WarpingFunction::Family::Exponential: return "exponential";
    case WarpingFunction::Family::Cosh: return "cosh";
    case WarpingFunction::Family::Polynomial: return "polynomial";
    case WarpingFunction::Family::PowerShifted: return "power_shifted";
  }
  return "unknown";
}

AmbientVector AmbientVector::from_packed(const Eigen::Matrix<double, 5, 1>& v) {
  return AmbientVector{v[0], v.tail<4>()};
}

Eigen::Matrix<double, 5, 1> AmbientVector::packed() const {
  Eigen::Matrix<double, 5, 1> v;
  v << t0, bar;
  return v;
}

RobertsonWalker::RobertsonWalker(WarpingFunction f, SpaceForm c) : f_(std::move(f)), c_(c) {}

double RobertsonWalker::metric(const AmbientPoint& p, const AmbientVector& x,
                               const AmbientVector& y) const {
  const double f = f_.value(p.t);
  return -x.t0 * y.t0 + f * f * embedding_inner(c_, x.bar, y.bar);
}

AmbientVector RobertsonWalker::connection(const AmbientPoint& p, const AmbientVector& x,
                                          const AmbientVector& y, const AmbientVector& dy) const {
  const auto j = f_.jet(p.t);
  const double gc = embedding_inner(c_, x.bar, y.bar);
  const double warp = j.df / j.f;
  AmbientVector out;
  // Product connection: flat derivative plus the space-form correction.
  out.t0 = dy.t0 + warp * j.f * j.f * gc;
  out.bar = dy.bar + fiber_connection_correction(p.fiber, x.bar, y.bar) +
            warp * (x.t0 * y.bar + y.t0 * x.bar);
  return tangent_project(p, out);
}

AmbientVector RobertsonWalker::covariant_derivative(
    const std::function<AmbientPoint(double)>& curve,
    const std::function<AmbientVector(double)>& field, double s, double step) const {
  const double h = step > 0.0 ? step : numdiff::default_step(s);
  for (double k : {-2.0, 2.0}) {
    const double t = curve(s + k * h).t;
    if (!f_.domain().contains(t)) {
      throw DomainError("differencing stencil leaves the warping interval at t=" +
                        std::to_string(t));
    }
  }
  const AmbientPoint p = curve(s);
  const AmbientVector velocity = tangent_project(
      p, numdiff::central4(
             [&](double r) {
               const AmbientPoint q = curve(r);
               return AmbientVector{q.t, q.fiber.x};
             },
             s, h));
  const AmbientVector dv = numdiff::central4(field, s, h);
  return connection(p, velocity, field(s), dv);
}

AmbientVector RobertsonWalker::curvature(const AmbientPoint& p, const AmbientVector& x,
                                         const AmbientVector& y, const AmbientVector& z) const {
  const auto j = f_.jet(p.t);
  const double f2 = j.f * j.f;
  const double mixed = j.d2f / j.f;
  const double vertical = (j.df * j.df + rwsurf::curvature(c_)) / f2;
  auto vinner = [&](const FiberVector& a, const FiberVector& b) {
    return f2 * embedding_inner(c_, a, b);
  };
  // R(d/dt, W) Z = (f''/f) (Z_0 W + <W, Zbar> d/dt)
  auto r_time = [&](const FiberVector& w) {
    return AmbientVector{mixed * vinner(w, z.bar), mixed * z.t0 * w};
  };
  AmbientVector out = x.t0 * r_time(y.bar) - y.t0 * r_time(x.bar);
  out.bar += vertical * (vinner(y.bar, z.bar) * x.bar - vinner(x.bar, z.bar) * y.bar);
  return out;
}

double RobertsonWalker::constant_curvature_defect(double t) const {
  const auto j = f_.jet(t);
  return j.d2f / j.f - (j.df * j.df + rwsurf::curvature(c_)) / (j.f * j.f);
}

double RobertsonWalker::scaled_curvature_defect(double t) const {
  const auto j = f_.jet(t);
  const double k = rwsurf::curvature(c_);
  const double scale =
      std::max({1.0, std::abs(j.d2f / j.f), std::abs((j.df * j.df + k) / (j.f * j.f))});
  return constant_curvature_defect(t) / scale;
}

double RobertsonWalker::vertical_curvature(double t) const {
  const auto j = f_.jet(t);
  return (j.df * j.df + rwsurf::curvature(c_)) / (j.f * j.f);
}

AmbientVector RobertsonWalker::tangent_project(const AmbientPoint& p,
                                               const AmbientVector& x) const {
  return AmbientVector{x.t0, fiber_tangent_project(p.fiber, x.bar)};
}

Eigen::Matrix<double, 5, 1> RobertsonWalker::model_normal(const AmbientPoint& p) const {
  Eigen::Matrix<double, 5, 1> n = Eigen::Matrix<double, 5, 1>::Zero();
  if (c_ != SpaceForm::Euclidean) n.tail<4>() = p.fiber.x;
  return n;
}

}  // namespace rwsurf
