#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"
#include "rwsurf/ode.hpp"

using namespace rwsurf;
using doctest::Approx;

namespace {

FrameODESystem make_system(FrameTemplate tmpl, CoefficientFunction a1, CoefficientFunction a2,
                           CoefficientFunction a3 = CoefficientFunction::constant(0.0)) {
  FrameODESystem sys;
  sys.tmpl = tmpl;
  sys.a1 = std::move(a1);
  sys.a2 = std::move(a2);
  sys.a3 = std::move(a3);
  for (int i = 0; i < sys.dimension(); ++i) sys.initial.push_back(FiberVector::Unit(i));
  return sys;
}

CoefficientFunction random_coefficient(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  if (rng() % 2) return CoefficientFunction::sinusoid(U(rng), 2.0 * U(rng), U(rng), U(rng));
  return CoefficientFunction::polynomial({U(rng), U(rng), 0.5 * U(rng)});
}

// Rotation solution of the sphere template with a1 = 1, a2 = a3 = 0.
double rotation_error(const FrameODESystem& sys, double v) {
  const FrameVectors al = integrate_frame(sys, v);
  const double s = v - sys.v0;
  const FiberVector a1 = std::cos(s) * sys.initial[0] + std::sin(s) * sys.initial[2];
  const FiberVector a3 = -std::sin(s) * sys.initial[0] + std::cos(s) * sys.initial[2];
  double err = (al[0] - a1).cwiseAbs().maxCoeff();
  err = std::max(err, (al[2] - a3).cwiseAbs().maxCoeff());
  err = std::max(err, (al[1] - sys.initial[1]).cwiseAbs().maxCoeff());
  err = std::max(err, (al[3] - sys.initial[3]).cwiseAbs().maxCoeff());
  return err;
}

const std::vector<FrameTemplate> kTemplates = {FrameTemplate::RW0, FrameTemplate::S3, FrameTemplate::H3};

}  // namespace

TEST_CASE("coefficient functions evaluate with derivatives") {
  const auto poly = CoefficientFunction::polynomial({1, -2, 3});
  CHECK(poly(2.0) == Approx(9.0));
  CHECK(poly.derivative(2.0) == Approx(10.0));
  const auto sn = CoefficientFunction::sinusoid(2.0, 3.0, 0.5, 1.0);
  CHECK(sn(0.2) == Approx(1.0 + 2.0 * std::sin(1.1)));
  CHECK(sn.derivative(0.2) == Approx(6.0 * std::cos(1.1)));
  const auto lin = CoefficientFunction::sampled({0, 1, 3}, {0, 2, 0});
  CHECK(lin(0.5) == Approx(1.0));
  CHECK(lin(2.0) == Approx(1.0));
  CHECK(lin(-1.0) == 0.0);
  CHECK(lin(5.0) == 0.0);
  CHECK(lin.derivative(0.5) == Approx(2.0));
  CHECK(lin.derivative(2.0) == Approx(-1.0));
  CHECK_THROWS_AS(CoefficientFunction::sampled({0, 1}, {1}), ConfigError);
  CHECK_THROWS_AS(CoefficientFunction::sampled({0, 0}, {1, 2}), ConfigError);
  CHECK(CoefficientFunction()(4.0) == 0.0);
}

TEST_CASE("zero coefficients give the constant solution") {
  for (FrameTemplate t : kTemplates) {
    const auto z = CoefficientFunction::constant(0.0);
    const FrameODESystem sys = make_system(t, z, z, z);
    const FrameVectors al = integrate_frame(sys, 1.7);
    for (int i = 0; i < sys.dimension(); ++i) CHECK((al[i] - sys.initial[i]).norm() == 0.0);
  }
}

TEST_CASE("sphere template rotation closed form") {
  const auto one = CoefficientFunction::constant(1.0), z = CoefficientFunction::constant(0.0);
  FrameODESystem sys = make_system(FrameTemplate::S3, one, z, z);
  sys.v0 = 0.3;
  CHECK(rotation_error(sys, 1.3) <= 1e-9);
  CHECK(rotation_error(sys, -0.7) <= 1e-9);
}

TEST_CASE("hyperbolic template keeps the Lorentz Gram matrix") {
  const FrameODESystem sys = make_system(FrameTemplate::H3, CoefficientFunction::constant(1.0),
                                         CoefficientFunction::constant(0.5),
                                         CoefficientFunction::constant(-0.8));
  CHECK(sys.signature() == Eigen::Vector4d(-1, 1, 1, 1));
  const FrameVectors al = integrate_frame(sys, 1.0);
  CHECK(gram_deviation(sys, al) <= 1e-9);
  CHECK(sys.inner(al[0], al[0]) == Approx(-1.0));
}

TEST_CASE("coefficient matrices are eta-skew") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-2, 2);
  for (FrameTemplate t : kTemplates) {
    const FrameODESystem sys =
        make_system(t, random_coefficient(rng), random_coefficient(rng), random_coefficient(rng));
    const Eigen::Matrix4d eta = sys.signature().asDiagonal();
    for (int k = 0; k < 20; ++k) {
      const Eigen::Matrix4d A = sys.coefficient_matrix(U(rng));
      CHECK((A * eta + eta * A.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("Gram conservation with random coefficients") {
  std::mt19937_64 rng(2024);
  for (FrameTemplate t : kTemplates) {
    for (int trial = 0; trial < 5; ++trial) {
      FrameODESystem sys =
          make_system(t, random_coefficient(rng), random_coefficient(rng), random_coefficient(rng));
      double worst = 0.0;
      for (double v = -2.0; v <= 2.0; v += 0.25) worst = std::max(worst, gram_deviation(sys, integrate_frame(sys, v)));
      CHECK(worst <= 1e-9);

      sys.reorthonormalize = false;
      sys.fixed_steps = 2000;
      CHECK(gram_deviation(sys, integrate_frame(sys, 2.0)) <= 1e-6);
      CHECK(gram_deviation(sys, integrate_frame(sys, -2.0)) <= 1e-6);
    }
  }
}

TEST_CASE("RK4 converges at fourth order on the rotation") {
  const auto one = CoefficientFunction::constant(1.0), z = CoefficientFunction::constant(0.0);
  FrameODESystem sys = make_system(FrameTemplate::S3, one, z, z);
  sys.reorthonormalize = false;
  sys.fixed_steps = 8;
  const double coarse = rotation_error(sys, 1.0);
  sys.fixed_steps = 16;
  const double fine = rotation_error(sys, 1.0);
  CHECK(coarse / fine >= 12.0);
  CHECK(coarse / fine <= 20.0);
}

TEST_CASE("frame right-hand side matches differencing of the solution") {
  std::mt19937_64 rng(9);
  const FrameODESystem sys = make_system(FrameTemplate::H3, random_coefficient(rng),
                                         random_coefficient(rng), random_coefficient(rng));
  const double v = 0.6;
  const FrameVectors rhs = frame_rhs(sys, v, integrate_frame(sys, v));
  for (int i = 0; i < 4; ++i) {
    const FiberVector d = numdiff::central4([&](double s) { return FiberVector(integrate_frame(sys, s)[i]); }, v, 1e-2);
    CHECK((d - rhs[i]).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("eta-Gram-Schmidt breakdown is an integration error") {
  const auto z = CoefficientFunction::constant(0.0);
  FrameODESystem h3 = make_system(FrameTemplate::H3, z, z, z);
  FrameVectors wrong = {FiberVector::Unit(1), FiberVector::Unit(0), FiberVector::Unit(2), FiberVector::Unit(3)};
  CHECK_THROWS_AS(eta_gram_schmidt(h3, wrong), IntegrationError);

  FrameODESystem rw0 = make_system(FrameTemplate::RW0, z, z);
  FrameVectors collinear = {FiberVector::Unit(0), 2.0 * FiberVector::Unit(0), FiberVector::Unit(2)};
  CHECK_THROWS_AS(eta_gram_schmidt(rw0, collinear), IntegrationError);

  FrameVectors skewed = {FiberVector(1, 0, 0, 0), FiberVector(1, 1, 0, 0), FiberVector(0.3, 0.2, 1, 0)};
  eta_gram_schmidt(rw0, skewed);
  CHECK(gram_deviation(rw0, skewed) <= 1e-15);

  rw0.initial.pop_back();
  CHECK_THROWS_AS(integrate_frame(rw0, 1.0), IntegrationError);
}

TEST_CASE("default step count") {
  CHECK(default_step_count(0.1) == 64);
  CHECK(default_step_count(2.0) == 200);
  CHECK(default_step_count(-2.0) == 200);
}

TEST_CASE("warp integral examples") {
  const WarpingFunction one = WarpingFunction::constant(1.0, {-10, 10});
  CHECK(warp_integral(one, 2.0, WarpSign::Minus, 0.4, 0.4) == 0.0);
  CHECK(warp_integral(one, std::sqrt(2.0), WarpSign::Minus, -0.5, 1.5) ==
        Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
  CHECK(warp_integral(one, 1.0, WarpSign::Plus, 0.0, 3.0) == Approx(3.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(warp_integral(one, 1.0, WarpSign::Plus, 3.0, 0.0) == Approx(-3.0 / std::sqrt(2.0)).epsilon(1e-13));
  CHECK(warp_integrand(one, std::sqrt(2.0), WarpSign::Minus, 0.7) == Approx(std::sqrt(2.0)));
}

TEST_CASE("warp integral matches a closed form") {
  // a / (e^u sqrt(a^2 + e^{2u})) integrates to -sqrt(a^2 e^{-2u} + 1) / a + const.
  const WarpingFunction f = WarpingFunction::exponential(1.0, 1.0, {-5, 5});
  const double a = 1.3;
  auto F = [&](double u) { return -std::sqrt(a * a * std::exp(-2.0 * u) + 1.0) / a; };
  CHECK(warp_integral(f, a, WarpSign::Plus, -1.0, 2.0) == Approx(F(2.0) - F(-1.0)).epsilon(1e-12));
}

TEST_CASE("warp integral is additive") {
  const WarpingFunction f = WarpingFunction::exponential(1.0, 1.0, {-1, 0.5});
  for (WarpSign sign : {WarpSign::Minus, WarpSign::Plus}) {
    const double i01 = warp_integral(f, 2.0, sign, -1.0, -0.3);
    const double i12 = warp_integral(f, 2.0, sign, -0.3, 0.45);
    const double i02 = warp_integral(f, 2.0, sign, -1.0, 0.45);
    CHECK(std::abs(i01 + i12 - i02) <= 1e-9);
  }
}

TEST_CASE("warp integral margin violation names the point") {
  const WarpingFunction f = WarpingFunction::exponential(1.0, 1.0, {-2, 2});
  CHECK_THROWS_AS(warp_integral(f, 2.0, WarpSign::Minus, 0.0, 1.0), DomainError);
  CHECK_NOTHROW(warp_integral(f, 2.0, WarpSign::Plus, 0.0, 1.0));
  try {
    warp_integral(f, 2.0, WarpSign::Minus, 0.0, 1.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("u=") != std::string::npos);
  }
}

TEST_CASE("phi2 and phi3 from their ODE") {
  const auto zero = CoefficientFunction::constant(0.0), one = CoefficientFunction::constant(1.0);
  auto [c2, c3] = phi23_from_ode(one, one, zero, 0.0, 2.0, 0.4, -0.2);
  CHECK(c2 == 0.4);
  CHECK(c3 == -0.2);

  auto [p2, p3] = phi23_from_ode(one, zero, one, 0.5, 1.7);
  CHECK(p2 == Approx(-1.2).epsilon(1e-13));
  CHECK(p3 == 0.0);

  const auto lin = CoefficientFunction::polynomial({0, 1});
  for (double v : {0.3, 1.0, -1.4}) {
    auto [q2, q3] = phi23_from_ode(zero, lin, one, 0.0, v);
    CHECK(q2 == 0.0);
    CHECK(std::abs(q3 + 0.5 * v * v) <= 1e-10);
  }
}
