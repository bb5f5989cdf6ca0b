#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"
#include "rwsurf/space_forms.hpp"

using namespace rwsurf;

namespace {

FiberPoint origin(SpaceForm c) {
  return c == SpaceForm::Euclidean ? FiberPoint{c, FiberVector::Zero()}
                                   : FiberPoint{c, FiberVector(1, 0, 0, 0)};
}

FiberVector random_point(SpaceForm c, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  FiberVector x(N(rng), N(rng), N(rng), N(rng));
  if (c == SpaceForm::Euclidean) {
    x[3] = 0;
    return x;
  }
  if (c == SpaceForm::Spherical) return x.normalized();
  x[0] = std::sqrt(1.0 + x.tail<3>().squaredNorm());
  return x;
}

}  // namespace

TEST_CASE("fiber_inner examples") {
  CHECK(fiber_inner(origin(SpaceForm::Euclidean), FiberVector(1, 0, 0, 0), FiberVector(1, 0, 0, 0)) == 1.0);
  CHECK(fiber_inner(origin(SpaceForm::Spherical), FiberVector(0, 1, 0, 0), FiberVector(0, 0, 1, 0)) == 0.0);
  CHECK(fiber_inner(origin(SpaceForm::Hyperbolic), FiberVector(0, 1, 0, 0), FiberVector(0, 1, 0, 0)) == 1.0);
}

TEST_CASE("fiber_inner rejects normal components") {
  CHECK_THROWS_AS(fiber_inner(origin(SpaceForm::Spherical), FiberVector(1, 1, 0, 0), FiberVector(0, 1, 0, 0)),
                  TangencyError);
  CHECK_THROWS_AS(fiber_inner(origin(SpaceForm::Hyperbolic), FiberVector(0.5, 0, 0, 0), FiberVector(0, 1, 0, 0)),
                  TangencyError);
  CHECK_THROWS_AS(fiber_inner(origin(SpaceForm::Euclidean), FiberVector(0, 0, 0, 1), FiberVector(0, 0, 0, 1)),
                  TangencyError);
}

TEST_CASE("hyperbolic tangent vectors have positive norm") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    const FiberPoint x{SpaceForm::Hyperbolic, random_point(SpaceForm::Hyperbolic, rng)};
    const FiberVector w = fiber_tangent_project(x, FiberVector(0.3, -1.2, 0.7, 2.0));
    CHECK(fiber_inner(x, w, w) > 0.0);
  }
}

TEST_CASE("fiber_tangent_project examples") {
  const FiberVector a = fiber_tangent_project(origin(SpaceForm::Euclidean), FiberVector(1, 2, 3, 0));
  CHECK(a.isApprox(FiberVector(1, 2, 3, 0)));
  const FiberVector b = fiber_tangent_project(origin(SpaceForm::Spherical), FiberVector(5, 1, 0, 0));
  CHECK((b - FiberVector(0, 1, 0, 0)).norm() < 1e-15);
  const FiberVector c = fiber_tangent_project(origin(SpaceForm::Hyperbolic), FiberVector(2, 3, 0, 0));
  CHECK((c - FiberVector(0, 3, 0, 0)).norm() < 1e-15);
}

TEST_CASE("projection is idempotent and tangent") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  for (SpaceForm c : {SpaceForm::Euclidean, SpaceForm::Spherical, SpaceForm::Hyperbolic}) {
    for (int k = 0; k < 100; ++k) {
      const FiberPoint x{c, random_point(c, rng)};
      FiberVector w(N(rng), N(rng), N(rng), N(rng));
      const FiberVector p1 = fiber_tangent_project(x, w);
      const FiberVector p2 = fiber_tangent_project(x, p1);
      CHECK((p1 - p2).norm() <= 1e-12 * std::max(1.0, w.norm()));
      if (c != SpaceForm::Euclidean) CHECK(std::abs(embedding_inner(c, p1, x.x)) <= 1e-12 * std::max(1.0, w.norm()) * x.x.norm());
    }
  }
}

TEST_CASE("fiber_connection_correction examples") {
  const FiberVector w(0, 1, 0, 0);
  CHECK(fiber_connection_correction(origin(SpaceForm::Euclidean), FiberVector(1, 2, 3, 0), FiberVector(3, 2, 1, 0)).norm() == 0.0);
  CHECK(fiber_connection_correction(origin(SpaceForm::Spherical), w, w).isApprox(FiberVector(1, 0, 0, 0)));
  CHECK(fiber_connection_correction(origin(SpaceForm::Hyperbolic), w, w).isApprox(FiberVector(-1, 0, 0, 0)));
}

TEST_CASE("model membership") {
  CHECK_NOTHROW(make_fiber_point(SpaceForm::Spherical, FiberVector(0.6, 0.8, 0, 0)));
  CHECK_THROWS_AS(make_fiber_point(SpaceForm::Spherical, FiberVector(1, 1, 0, 0)), DomainError);
  CHECK_NOTHROW(make_fiber_point(SpaceForm::Hyperbolic, FiberVector(std::sqrt(2.0), 1, 0, 0)));
  // lower sheet
  CHECK_THROWS_AS(make_fiber_point(SpaceForm::Hyperbolic, FiberVector(-std::sqrt(2.0), 1, 0, 0)), DomainError);
  CHECK_THROWS_AS(make_fiber_point(SpaceForm::Euclidean, FiberVector(0, 0, 0, 1)), DomainError);
  CHECK_THROWS_AS(space_form_from_int(2), ConfigError);
  CHECK(space_form_from_int(-1) == SpaceForm::Hyperbolic);
}

TEST_CASE("project_to_model lands on the model") {
  std::mt19937_64 rng(3);
  for (SpaceForm c : {SpaceForm::Spherical, SpaceForm::Hyperbolic}) {
    for (int k = 0; k < 20; ++k) {
      const FiberVector x = random_point(c, rng) * 1.01;
      CHECK(model_residual(c, project_to_model(c, x)) < 1e-14);
    }
  }
}

// Along a model curve, d/ds <a', a'> = 2 <nabla a', a'> where nabla = D + correction.
TEST_CASE("model connection is metric compatible along curves") {
  auto check = [](SpaceForm c, auto curve) {
    for (double s : {-0.4, 0.1, 0.7}) {
      const double h = 1e-3;
      auto vel = [&](double x) { return numdiff::central4(curve, x, 1e-4); };
      const FiberPoint p{c, curve(s)};
      const FiberVector v = vel(s);
      const FiberVector acc = numdiff::central4(vel, s, h);
      const FiberVector nabla = acc + fiber_connection_correction(p, v, v);
      const double lhs = numdiff::central4([&](double x) { return embedding_inner(c, vel(x), vel(x)); }, s, h);
      CHECK(std::abs(lhs - 2.0 * embedding_inner(c, nabla, v)) < 1e-6);
    }
  };
  check(SpaceForm::Spherical, [](double s) {
    return FiberVector(std::cos(s) * std::cos(s * s), std::cos(s) * std::sin(s * s), std::sin(s), 0).eval();
  });
  check(SpaceForm::Hyperbolic, [](double s) {
    const double r = 0.5 + s * s;
    return FiberVector(std::cosh(r), std::sinh(r) * std::cos(s), std::sinh(r) * std::sin(s), 0).eval();
  });
}

TEST_CASE("great circle is a geodesic") {
  auto curve = [](double s) { return FiberVector(std::cos(s), std::sin(s), 0, 0).eval(); };
  for (double s : {0.0, 0.5, 2.0}) {
    auto vel = [&](double x) { return numdiff::central4(curve, x, 1e-4); };
    const FiberVector v = vel(s);
    const FiberVector nabla = numdiff::central4(vel, s, 1e-3) +
                              fiber_connection_correction(FiberPoint{SpaceForm::Spherical, curve(s)}, v, v);
    CHECK(nabla.norm() < 1e-8);
  }
}
