#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rwsurf/ambient.hpp"
#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"
#include "rwsurf/verify.hpp"

using namespace rwsurf;
using doctest::Approx;

namespace {

const Interval kWide{-3, 3};

AmbientPoint at(double t, SpaceForm c = SpaceForm::Euclidean) {
  FiberVector x = FiberVector::Zero();
  if (c != SpaceForm::Euclidean) x[0] = 1.0;
  if (c == SpaceForm::Euclidean) x << 0.3, -0.2, 0.5, 0;
  return AmbientPoint{t, FiberPoint{c, x}};
}

AmbientVector bar(double a, double b, double c, double d = 0) { return AmbientVector{0.0, FiberVector(a, b, c, d)}; }

}  // namespace

TEST_CASE("warping jets match their derivatives") {
  const std::vector<WarpingFunction> fs = {
      WarpingFunction::constant(2.0, kWide), WarpingFunction::exponential(1.5, 0.7, kWide),
      WarpingFunction::cosh(1.0, 1.3, kWide), WarpingFunction::polynomial({2, 1, 0.5}, kWide),
      WarpingFunction::power_shifted(1.0, 4.0, 1.5, kWide)};
  for (const auto& f : fs) {
    CHECK(f.validate().empty());
    for (double t : {-1.0, 0.0, 0.8}) {
      CHECK(numdiff::central4([&](double s) { return f.value(s); }, t, 1e-3) == Approx(f.first(t)).epsilon(1e-9));
      CHECK(numdiff::central4([&](double s) { return f.first(s); }, t, 1e-3) == Approx(f.second(t)).epsilon(1e-9));
    }
  }
}

TEST_CASE("vanishing warping functions are reported") {
  CHECK_FALSE(WarpingFunction::polynomial({0, 1}, {-1, 1}).validate().empty());
  CHECK_FALSE(WarpingFunction::power_shifted(1.0, 0.0, 2.0, {-1, 1}).validate().empty());
  CHECK_THROWS_AS(WarpingFunction::cosh(1.0, 1.0, {2, 1}), ConfigError);
}

TEST_CASE("ambient metric examples") {
  const RobertsonWalker flat(WarpingFunction::constant(1.0, kWide), SpaceForm::Euclidean);
  const RobertsonWalker two(WarpingFunction::constant(2.0, kWide), SpaceForm::Euclidean);
  CHECK(flat.metric(at(0), AmbientVector::d_dt(), AmbientVector::d_dt()) == -1.0);
  CHECK(two.metric(at(0), bar(1, 0, 0), bar(1, 0, 0)) == 4.0);
  CHECK(flat.metric(at(0), AmbientVector::d_dt(), bar(0.2, 1, 3)) == 0.0);
}

TEST_CASE("covariant derivative examples") {
  const RobertsonWalker rw(WarpingFunction::cosh(1.0, 1.0, kWide), SpaceForm::Euclidean);
  const FiberVector xs(0.3, -0.2, 0.5, 0);
  auto tline = [&](double s) { return AmbientPoint{s, FiberPoint{SpaceForm::Euclidean, xs}}; };
  const double s0 = 0.4;
  // d/dt is parallel along t-lines.
  const AmbientVector a = rw.covariant_derivative(tline, [](double) { return AmbientVector::d_dt(); }, s0);
  CHECK(a.max_abs() < 1e-12);
  // A constant fiber field picks up (f'/f) Xbar.
  const AmbientVector b = rw.covariant_derivative(tline, [](double) { return bar(1, 2, -1); }, s0);
  const double w = std::tanh(s0);
  CHECK((b - w * bar(1, 2, -1)).max_abs() < 1e-9);
}

TEST_CASE("flat ambient reduces to the flat derivative") {
  const RobertsonWalker rw(WarpingFunction::constant(1.0, kWide), SpaceForm::Euclidean);
  auto curve = [](double s) {
    return AmbientPoint{s * s, FiberPoint{SpaceForm::Euclidean, FiberVector(s, 1 - s, s * s * s, 0)}};
  };
  auto field = [](double s) { return AmbientVector{1 + s, FiberVector(s * s, -s, 2 * s * s * s, 0)}; };
  const double s0 = 0.3;
  const AmbientVector got = rw.covariant_derivative(curve, field, s0);
  const AmbientVector want{1.0, FiberVector(2 * s0, -1, 6 * s0 * s0, 0)};
  CHECK((got - want).max_abs() < 1e-10);
}

TEST_CASE("curvature examples") {
  const RobertsonWalker rw(WarpingFunction::cosh(1.0, 1.0, kWide), SpaceForm::Euclidean);
  const AmbientPoint p = at(0.0);
  const AmbientVector X = bar(1, -2, 0.5);
  const AmbientVector r1 = rw.curvature(p, AmbientVector::d_dt(), X, AmbientVector::d_dt());
  CHECK((r1 - X).max_abs() < 1e-15);
  const AmbientVector r2 = rw.curvature(at(0.7), bar(1, 0, 0), bar(0, 1, 0), AmbientVector::d_dt());
  CHECK(r2.max_abs() < 1e-15);
  const RobertsonWalker flat(WarpingFunction::constant(1.0, kWide), SpaceForm::Euclidean);
  CHECK(flat.curvature(p, bar(1, 2, 3) + AmbientVector::d_dt(), bar(0, 1, 0), bar(3, 1, 2)).max_abs() == 0.0);
}

TEST_CASE("sectional curvature of vertical planes") {
  for (SpaceForm c : {SpaceForm::Euclidean, SpaceForm::Spherical, SpaceForm::Hyperbolic}) {
    const RobertsonWalker rw(WarpingFunction::cosh(1.0, 1.0, kWide), c);
    const double t = 0.6;
    const AmbientPoint p = at(t, c);
    const double f = std::cosh(t);
    // orthonormal fiber directions at p
    const AmbientVector X = (1.0 / f) * bar(0, 1, 0, 0);
    const AmbientVector Y = (1.0 / f) * bar(0, 0, 1, 0);
    const double K = rw.metric(p, rw.curvature(p, X, Y, Y), X);
    const double df = std::sinh(t);
    CHECK(K == Approx((df * df + curvature(c)) / (f * f)).epsilon(1e-12));
    CHECK(rw.vertical_curvature(t) == Approx(K).epsilon(1e-12));
  }
}

TEST_CASE("constant curvature defect examples") {
  const RobertsonWalker e(WarpingFunction::exponential(1.0, 1.0, kWide), SpaceForm::Euclidean);
  for (double t : {-1.0, 0.0, 2.0}) CHECK(std::abs(e.constant_curvature_defect(t)) < 1e-14);
  const RobertsonWalker s(WarpingFunction::constant(1.0, kWide), SpaceForm::Spherical);
  CHECK(s.constant_curvature_defect(0.3) == Approx(-1.0));
  const RobertsonWalker lin(WarpingFunction::polynomial({0, 1}, {0.5, 3}), SpaceForm::Euclidean);
  CHECK(lin.constant_curvature_defect(2.0) == Approx(-0.25));
}

TEST_CASE("ambient oracles across warpings and fibers") {
  const std::vector<WarpingFunction> fs = {WarpingFunction::cosh(1.0, 1.0, {-2, 2}),
                                           WarpingFunction::polynomial({2, 1}, {-1.5, 3}),
                                           WarpingFunction::exponential(1.0, 1.0, {-2, 2})};
  for (const auto& f : fs) {
    for (SpaceForm c : {SpaceForm::Hyperbolic, SpaceForm::Euclidean, SpaceForm::Spherical}) {
      const RobertsonWalker rw(f, c);
      CAPTURE(to_string(f.family()));
      CAPTURE(to_string(c));
      const CheckResult curv = check_curvature_lemma(rw, 30, 99);
      CHECK(curv.pass);
      CHECK(curv.max_residual <= 1e-4);
      CHECK(check_metric_compatibility(rw, 30, 99).max_residual <= 1e-6);
      CHECK(check_torsion(rw, 30, 99).max_residual <= 1e-6);
    }
  }
}

TEST_CASE("flat ambient curvature oracle is zero") {
  const RobertsonWalker rw(WarpingFunction::constant(1.0, kWide), SpaceForm::Euclidean);
  CHECK(check_curvature_lemma(rw, 20, 5).max_residual < 1e-8);
}

TEST_CASE("oracles are deterministic for a seed") {
  const RobertsonWalker rw(WarpingFunction::cosh(1.0, 1.0, {-2, 2}), SpaceForm::Spherical);
  CHECK(check_curvature_lemma(rw, 10, 42).max_residual == check_curvature_lemma(rw, 10, 42).max_residual);
}

TEST_CASE("tangent projection removes the radial part") {
  const RobertsonWalker rw(WarpingFunction::constant(1.0, kWide), SpaceForm::Spherical);
  const AmbientVector v = rw.tangent_project(at(0.0, SpaceForm::Spherical), AmbientVector{2.0, FiberVector(3, 1, 0, 0)});
  CHECK(v.t0 == 2.0);
  CHECK((v.bar - FiberVector(0, 1, 0, 0)).norm() < 1e-15);
}
