#include "rwsurf/space_forms.hpp"

#include <cmath>
#include <string>

#include "rwsurf/errors.hpp"

namespace rwsurf {

std::string to_string(SpaceForm c) {
  switch (c) {
    case SpaceForm::Hyperbolic: return "H3";
    case SpaceForm::Euclidean: return "E3";
    case SpaceForm::Spherical: return "S3";
  }
  return "?";
}

SpaceForm space_form_from_int(int c) {
  switch (c) {
    case -1: return SpaceForm::Hyperbolic;
    case 0: return SpaceForm::Euclidean;
    case 1: return SpaceForm::Spherical;
    default: throw ConfigError("space form curvature must be -1, 0 or 1, got " + std::to_string(c));
  }
}

double embedding_inner(SpaceForm c, const FiberVector& a, const FiberVector& b) {
  const double d = a.dot(b);
  return c == SpaceForm::Hyperbolic ? d - 2.0 * a[0] * b[0] : d;
}

double model_residual(SpaceForm c, const FiberVector& x) {
  switch (c) {
    case SpaceForm::Euclidean: return std::abs(x[3]);
    case SpaceForm::Spherical: return std::abs(x.squaredNorm() - 1.0);
    case SpaceForm::Hyperbolic: {
      const double r = std::abs(embedding_inner(c, x, x) + 1.0);
      return x[0] > 0.0 ? r : std::max(r, 1.0);
    }
  }
  return 0.0;
}

FiberPoint make_fiber_point(SpaceForm c, const FiberVector& x, double tol) {
  const double r = model_residual(c, x);
  if (!(r <= tol)) {
    throw DomainError("fiber point violates the model constraint (residual " + std::to_string(r) +
                      ")");
  }
  return FiberPoint{c, x};
}

FiberVector project_to_model(SpaceForm c, const FiberVector& x) {
  switch (c) {
    case SpaceForm::Euclidean: {
      FiberVector y = x;
      y[3] = 0.0;
      return y;
    }
    case SpaceForm::Spherical: return x / x.norm();
    case SpaceForm::Hyperbolic: {
      const double q = -embedding_inner(c, x, x);
      if (!(q > 0.0) || x[0] <= 0.0) throw DomainError("point cannot be projected onto H^3");
      return x / std::sqrt(q);
    }
  }
  return x;
}

namespace {

// <w, n> / <n, n> where n is the position normal; zero for the flat model.
double normal_coefficient(const FiberPoint& x, const FiberVector& w) {
  if (x.c == SpaceForm::Euclidean) return 0.0;
  return embedding_inner(x.c, w, x.x) / embedding_inner(x.c, x.x, x.x);
}

}  // namespace

double fiber_inner(const FiberPoint& x, const FiberVector& w1, const FiberVector& w2, double tol) {
  for (const FiberVector* w : {&w1, &w2}) {
    double off = 0.0;
    if (x.c == SpaceForm::Euclidean) {
      off = std::abs((*w)[3]);
    } else {
      off = std::abs(embedding_inner(x.c, *w, x.x));
    }
    if (off > tol * std::max(1.0, w->norm())) {
      throw TangencyError("vector is not tangent to the fiber model (normal part " +
                          std::to_string(off) + ")");
    }
  }
  return embedding_inner(x.c, w1, w2);
}

FiberVector fiber_tangent_project(const FiberPoint& x, const FiberVector& w) {
  if (x.c == SpaceForm::Euclidean) {
    FiberVector y = w;
    y[3] = 0.0;
    return y;
  }
  return w - normal_coefficient(x, w) * x.x;
}

FiberVector fiber_connection_correction(const FiberPoint& x, const FiberVector& w1,
                                        const FiberVector& w2) {
  if (x.c == SpaceForm::Euclidean) return FiberVector::Zero();
  return curvature(x.c) * embedding_inner(x.c, w1, w2) * x.x;
}

}  // namespace rwsurf
