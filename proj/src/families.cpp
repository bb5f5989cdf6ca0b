#include "rwsurf/families.hpp"

#include <cmath>
#include <memory>
#include <sstream>
#include <unordered_map>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"

namespace rwsurf {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::SpacelikeRW0: return "SpacelikeRW0";
    case FamilyKind::TimelikeRW0: return "TimelikeRW0";
    case FamilyKind::ProductCurve: return "ProductCurve";
    case FamilyKind::SpacelikeS3: return "SpacelikeS3";
    case FamilyKind::TimelikeS3: return "TimelikeS3";
    case FamilyKind::SpacelikeH3: return "SpacelikeH3";
    case FamilyKind::TimelikeH3: return "TimelikeH3";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  for (FamilyKind k : {FamilyKind::SpacelikeRW0, FamilyKind::TimelikeRW0, FamilyKind::ProductCurve,
                       FamilyKind::SpacelikeS3, FamilyKind::TimelikeS3, FamilyKind::SpacelikeH3,
                       FamilyKind::TimelikeH3}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown family kind '" + name + "'");
}

bool is_rw0(FamilyKind kind) {
  return kind == FamilyKind::SpacelikeRW0 || kind == FamilyKind::TimelikeRW0;
}

bool is_flat_time(FamilyKind kind) {
  return kind == FamilyKind::SpacelikeS3 || kind == FamilyKind::TimelikeS3 ||
         kind == FamilyKind::SpacelikeH3 || kind == FamilyKind::TimelikeH3;
}

bool is_timelike_kind(FamilyKind kind) {
  return kind == FamilyKind::TimelikeRW0 || kind == FamilyKind::ProductCurve ||
         kind == FamilyKind::TimelikeS3 || kind == FamilyKind::TimelikeH3;
}

SpaceForm fiber_of(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::SpacelikeRW0:
    case FamilyKind::TimelikeRW0: return SpaceForm::Euclidean;
    case FamilyKind::SpacelikeS3:
    case FamilyKind::TimelikeS3: return SpaceForm::Spherical;
    case FamilyKind::SpacelikeH3:
    case FamilyKind::TimelikeH3: return SpaceForm::Hyperbolic;
    case FamilyKind::ProductCurve: return spec.c;
  }
  return spec.c;
}

RobertsonWalker ambient_for(const FamilySpec& spec) {
  if (is_flat_time(spec.kind)) {
    return RobertsonWalker(WarpingFunction::constant(1.0, {-1e6, 1e6}), fiber_of(spec));
  }
  if (!spec.warping) throw ConfigError(to_string(spec.kind) + " needs a warping function");
  return RobertsonWalker(*spec.warping, fiber_of(spec));
}

namespace {

int steps_for(const FamilySpec& spec) {
  const double span =
      std::max(std::abs(spec.rect.v.lo - spec.v0), std::abs(spec.rect.v.hi - spec.v0));
  return default_step_count(span);
}

std::vector<FiberVector> standard_basis(int n) {
  std::vector<FiberVector> out;
  for (int i = 0; i < n; ++i) out.push_back(FiberVector::Unit(i));
  return out;
}

}  // namespace

FrameODESystem frame_system(const FamilySpec& spec) {
  FrameODESystem sys;
  if (is_rw0(spec.kind)) {
    sys.tmpl = FrameTemplate::RW0;
  } else if (spec.kind == FamilyKind::SpacelikeS3 || spec.kind == FamilyKind::TimelikeS3) {
    sys.tmpl = FrameTemplate::S3;
  } else {
    sys.tmpl = FrameTemplate::H3;
  }
  sys.a1 = spec.a1;
  sys.a2 = spec.a2;
  sys.a3 = spec.a3;
  sys.initial = spec.initial.empty() ? standard_basis(sys.dimension()) : spec.initial;
  sys.v0 = spec.v0;
  sys.fixed_steps = steps_for(spec);
  return sys;
}

namespace {

// Fiber curve with velocity and covariant acceleration.
class FiberCurve {
 public:
  FiberCurve(const CurveSpec& spec, SpaceForm c) : spec_(spec), c_(c) {
    if (spec.type == CurveSpec::Type::Sampled) {
      const int dims = c == SpaceForm::Euclidean ? 3 : 4;
      for (int k = 0; k < dims; ++k) {
        std::vector<double> coords;
        for (const auto& x : spec.samples) coords.push_back(x[k]);
        splines_.push_back(std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            coords.data(), coords.size(), spec.s0, spec.ds));
      }
    }
  }

  FiberVector point(double s) const {
    if (spec_.type == CurveSpec::Type::Circle) return circle(s, 0);
    return project_to_model(c_, raw(s, 0));
  }

  FiberVector velocity(double s) const {
    if (spec_.type == CurveSpec::Type::Circle) return circle(s, 1);
    const FiberVector x = raw(s, 0);
    const FiberVector w = raw(s, 1);
    if (c_ == SpaceForm::Euclidean) return w;
    const double k = curvature(c_);
    const double sc = std::sqrt(k * embedding_inner(c_, x, x));
    return w / sc - (k * embedding_inner(c_, x, w) / (sc * sc * sc)) * x;
  }

  /// Covariant acceleration nabla_{alpha'} alpha'.
  FiberVector acceleration(double s) const {
    FiberVector raw_acc;
    if (spec_.type == CurveSpec::Type::Circle) {
      raw_acc = circle(s, 2);
    } else {
      const double h = numdiff::default_step(s) * std::max(1.0, spec_.ds);
      raw_acc = numdiff::central4([&](double r) { return velocity(r); }, s, h);
    }
    return fiber_tangent_project(FiberPoint{c_, point(s)}, raw_acc);
  }

  /// Geodesic curvature in R^3(c).
  double geodesic_curvature(double s) const {
    const FiberVector v = velocity(s);
    FiberVector acc = acceleration(s);
    const double vv = embedding_inner(c_, v, v);
    acc -= (embedding_inner(c_, acc, v) / vv) * v;
    return std::sqrt(std::max(0.0, embedding_inner(c_, acc, acc))) / vv;
  }

  Interval parameter_range() const {
    if (spec_.type == CurveSpec::Type::Circle) return {-1e300, 1e300};
    return {spec_.s0, spec_.s0 + spec_.ds * (static_cast<double>(spec_.samples.size()) - 1.0)};
  }

 private:
  FiberVector raw(double s, int order) const {
    FiberVector out = FiberVector::Zero();
    for (std::size_t k = 0; k < splines_.size(); ++k) {
      const auto& sp = *splines_[k];
      out[static_cast<int>(k)] = order == 0 ? sp(s) : sp.prime(s);
    }
    return out;
  }

  // Unit-speed circle of the given (geodesic) radius and its derivatives.
  FiberVector circle(double s, int order) const {
    const double r = spec_.radius;
    FiberVector out = FiberVector::Zero();
    if (c_ == SpaceForm::Euclidean) {
      const double sg = s / r;
      const double scale = order == 0 ? r : (order == 1 ? 1.0 : 1.0 / r);
      const double cs = std::cos(sg), sn = std::sin(sg);
      if (order == 0) out << scale * cs, scale * sn, 0, 0;
      if (order == 1) out << -sn, cs, 0, 0;
      if (order == 2) out << -scale * cs, -scale * sn, 0, 0;
      return out;
    }
    const double rho = c_ == SpaceForm::Spherical ? std::sin(r) : std::sinh(r);
    const double lead = c_ == SpaceForm::Spherical ? std::cos(r) : std::cosh(r);
    const double sg = s / rho;
    const double cs = std::cos(sg), sn = std::sin(sg);
    if (order == 0) out << lead, rho * cs, rho * sn, 0;
    if (order == 1) out << 0, -sn, cs, 0;
    if (order == 2) out << 0, -cs / rho, -sn / rho, 0;
    return out;
  }

  CurveSpec spec_;
  SpaceForm c_;
  std::vector<std::shared_ptr<boost::math::interpolators::cardinal_cubic_b_spline<double>>> splines_;
};

bool vanishes_on_open_set(const std::function<double(double)>& g, const Interval& range,
                          int samples, double tol, double* where) {
  int run = 0;
  for (int i = 0; i <= samples; ++i) {
    const double x = range.lo + range.length() * i / samples;
    if (std::abs(g(x)) <= tol) {
      if (++run == 1) *where = x;
      if (run >= 3) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::vector<Diagnostic> validate_spec(const FamilySpec& spec, int samples) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string code, std::string msg, std::optional<double> u = std::nullopt,
                 std::optional<double> v = std::nullopt) {
    out.push_back(Diagnostic{std::move(code), std::move(msg), u, v});
  };
  if (!(spec.rect.u.hi > spec.rect.u.lo) || !(spec.rect.v.hi > spec.rect.v.lo)) {
    add("rect-empty", "parameter rectangle is empty");
    return out;
  }

  if (is_rw0(spec.kind) || spec.kind == FamilyKind::ProductCurve) {
    if (!spec.warping) {
      add("warping-missing", to_string(spec.kind) + " needs a warping function");
      return out;
    }
    const WarpingFunction& f = *spec.warping;
    for (const auto& msg : f.validate()) add("warping-invalid", msg);
    if (!(f.domain().lo <= spec.rect.u.lo && spec.rect.u.hi <= f.domain().hi)) {
      add("warping-domain", "u range [" + fmt(spec.rect.u.lo) + ", " + fmt(spec.rect.u.hi) +
                                "] leaves the warping interval");
    }
    if (!out.empty()) return out;
  } else if (spec.warping) {
    const WarpingFunction& f = *spec.warping;
    if (f.family() != WarpingFunction::Family::Constant || f.params().at(0) != 1.0) {
      add("ambient-mismatch", to_string(spec.kind) + " lives in a product with f = 1");
    }
  }

  if (is_rw0(spec.kind)) {
    const RobertsonWalker rw = ambient_for(spec);
    double where = 0.0;
    auto defect = [&](double t) { return rw.scaled_curvature_defect(t); };
    if (vanishes_on_open_set(defect, spec.rect.u, samples, 1e-12, &where)) {
      add("constant-curvature-ambient",
          "constant-curvature ambient: f''/f - (f'^2 + c)/f^2 vanishes on an open set near t=" +
              fmt(where),
          where);
    }
    if (spec.a == 0.0) add("a-zero", "the constant a must be nonzero");
    if (spec.kind == FamilyKind::SpacelikeRW0 && spec.a != 0.0) {
      const double margin = 1e-4 * std::abs(spec.a);
      for (int i = 0; i <= samples; ++i) {
        const double u = spec.rect.u.lo + spec.rect.u.length() * i / samples;
        const double fu = spec.warping->value(u);
        if (spec.a * spec.a - fu * fu < margin * margin) {
          add("warp-margin", "a^2 - f(u)^2 <= 0 (within margin) at u=" + fmt(u), u);
          break;
        }
      }
    }
  }

  if (spec.kind == FamilyKind::SpacelikeS3 || spec.kind == FamilyKind::SpacelikeH3 ||
      spec.kind == FamilyKind::TimelikeH3) {
    if (spec.theta0 == 0.0) add("theta0-zero", to_string(spec.kind) + " needs theta0 != 0");
  }

  if (spec.kind != FamilyKind::ProductCurve) {
    const FrameODESystem sys = frame_system(spec);
    const double dev = sys.initial_gram_deviation();
    if (!(dev <= 1e-12)) {
      add("initial-frame", "initial vectors are not orthonormal for the " + to_string(sys.tmpl) +
                               " signature (deviation " + fmt(dev) + ")");
    } else if (sys.tmpl == FrameTemplate::H3 && sys.initial[0][0] <= 0.0) {
      add("initial-frame", "C_1 must be future-directed (first coordinate > 0)");
    } else if (sys.tmpl == FrameTemplate::RW0) {
      for (const auto& cvec : sys.initial) {
        if (cvec[3] != 0.0) add("initial-frame", "RW0 initial vectors live in E^3 (slot 4 must be 0)");
      }
    }
  }

  if (is_flat_time(spec.kind)) {
    double where = 0.0;
    if (vanishes_on_open_set([&](double v) { return spec.a3(v); }, spec.rect.v, samples, 1e-12,
                             &where)) {
      add("totally-geodesic",
          "a3 vanishes on an open set near v=" + fmt(where) +
              ": the surface would lie in a totally geodesic hypersurface",
          std::nullopt, where);
    }
  }

  if (spec.kind == FamilyKind::ProductCurve) {
    const auto& cs = spec.curve;
    if (cs.type == CurveSpec::Type::Circle) {
      if (!(cs.radius > 0.0)) add("curve-invalid", "circle radius must be positive");
      if (spec.c == SpaceForm::Spherical && !(cs.radius < M_PI)) {
        add("curve-invalid", "geodesic radius in S^3 must be below pi");
      }
    } else {
      if (cs.samples.size() < 4) add("curve-invalid", "sampled curve needs at least 4 points");
      if (!(cs.ds > 0.0)) add("curve-invalid", "sample spacing must be positive");
      if (out.empty()) {
        const double end = cs.s0 + cs.ds * (static_cast<double>(cs.samples.size()) - 1.0);
        if (spec.rect.v.lo < cs.s0 || spec.rect.v.hi > end) {
          add("curve-invalid", "v range leaves the sampled curve's parameter range");
        }
      }
    }
  }
  return out;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string msg = "inadmissible family:";
  for (const auto& d : diags) msg += " [" + d.code + "] " + d.message + ";";
  return msg;
}

}  // namespace

InadmissibleSpecError::InadmissibleSpecError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

namespace {

AmbientVector fiber_vector(const FiberVector& x) { return AmbientVector{0.0, x}; }

// Stencils revisit the same abscissae many times; the integrators are pure
// functions of their argument, so results are remembered per exact value.
template <class V>
class Memo {
 public:
  template <class F>
  V get(double key, F&& compute) const {
    auto it = table_->find(key);
    if (it != table_->end()) return it->second;
    if (table_->size() > (1u << 16)) table_->clear();
    V value = compute(key);
    table_->emplace(key, value);
    return value;
  }

 private:
  std::shared_ptr<std::unordered_map<double, V>> table_ =
      std::make_shared<std::unordered_map<double, V>>();
};

Immersion build_rw0(const FamilySpec& spec) {
  const FrameODESystem sys = frame_system(spec);
  const WarpingFunction f = *spec.warping;
  const WarpSign sign = spec.kind == FamilyKind::SpacelikeRW0 ? WarpSign::Minus : WarpSign::Plus;
  const double a = spec.a;
  const FamilySpec s = spec;
  const Memo<FrameVectors> frame_memo;
  const Memo<std::pair<double, double>> phi_memo;
  const Memo<double> warp_memo;
  auto frame_at = [=](double v) {
    return frame_memo.get(v, [&](double x) { return integrate_frame(sys, x); });
  };
  auto phi23_at = [=](double v) {
    return phi_memo.get(v, [&](double x) {
      return phi23_from_ode(s.a1, s.a2, s.phi1, s.v0, x, s.phi2_0, s.phi3_0, sys.fixed_steps);
    });
  };
  auto warp_at = [=](double u) {
    return warp_memo.get(u, [&](double x) { return warp_quadrature(f, a, sign, s.u0, x); });
  };
  Immersion im;
  im.domain = spec.rect;
  im.c = SpaceForm::Euclidean;
  im.point = [=](double u, double v) {
    const FrameVectors al = frame_at(v);
    const auto [p2, p3] = phi23_at(v);
    const double I = warp_at(u);
    AmbientPoint p;
    p.t = u;
    p.fiber = FiberPoint{SpaceForm::Euclidean, s.phi1(v) * al[0] + (I + p2) * al[1] + p3 * al[2]};
    return p;
  };
  im.partials = [=](double u, double v) {
    const FrameVectors al = frame_at(v);
    const FrameVectors dal = frame_rhs(sys, v, al);
    const auto [p2, p3] = phi23_at(v);
    const double I = warp_at(u);
    const double dI = warp_integrand(f, a, sign, u);
    const double ph1 = s.phi1(v);
    const double dp2 = -s.a1(v) * ph1;
    const double dp3 = -s.a2(v) * ph1;
    const FiberVector xv = s.phi1.derivative(v) * al[0] + ph1 * dal[0] + dp2 * al[1] +
                           (I + p2) * dal[1] + dp3 * al[2] + p3 * dal[2];
    return std::array<AmbientVector, 2>{AmbientVector{1.0, dI * al[1]}, fiber_vector(xv)};
  };
  return im;
}

Immersion build_flat_time(const FamilySpec& spec) {
  const FrameODESystem sys = frame_system(spec);
  const bool spacelike = spec.kind == FamilyKind::SpacelikeS3 || spec.kind == FamilyKind::SpacelikeH3;
  const bool sphere = sys.tmpl == FrameTemplate::S3;
  const double tau = spacelike ? std::sinh(spec.theta0) : std::cosh(spec.theta0);
  const double k = spacelike ? std::cosh(spec.theta0) : std::sinh(spec.theta0);
  const SpaceForm c = fiber_of(spec);
  // (cos, sin) on S^3, (cosh, sinh) on H^3, with derivatives.
  auto trig = [sphere](double x) {
    if (sphere) return std::array<double, 4>{std::cos(x), std::sin(x), -std::sin(x), std::cos(x)};
    return std::array<double, 4>{std::cosh(x), std::sinh(x), std::sinh(x), std::cosh(x)};
  };
  const Memo<FrameVectors> frame_memo;
  auto frame_at = [=](double v) {
    return frame_memo.get(v, [&](double x) { return integrate_frame(sys, x); });
  };
  Immersion im;
  im.domain = spec.rect;
  im.c = c;
  im.point = [=](double u, double v) {
    const FrameVectors al = frame_at(v);
    const auto g = trig(k * u);
    return AmbientPoint{tau * u, FiberPoint{c, g[0] * al[0] + g[1] * al[1]}};
  };
  im.partials = [=](double u, double v) {
    const FrameVectors al = frame_at(v);
    const FrameVectors dal = frame_rhs(sys, v, al);
    const auto g = trig(k * u);
    return std::array<AmbientVector, 2>{
        AmbientVector{tau, k * (g[2] * al[0] + g[3] * al[1])},
        fiber_vector(g[0] * dal[0] + g[1] * dal[1])};
  };
  if (spec.kind == FamilyKind::TimelikeS3) {
    im.normal_hint = [=](double, double v) -> std::optional<AmbientVector> {
      return fiber_vector(-frame_at(v)[1]);
    };
  }
  return im;
}

Immersion build_product(const FamilySpec& spec) {
  const auto curve = std::make_shared<FiberCurve>(spec.curve, spec.c);
  const SpaceForm c = spec.c;
  Immersion im;
  im.domain = spec.rect;
  im.c = c;
  im.point = [=](double u, double v) { return AmbientPoint{u, FiberPoint{c, curve->point(v)}}; };
  im.partials = [=](double, double v) {
    return std::array<AmbientVector, 2>{AmbientVector::d_dt(), fiber_vector(curve->velocity(v))};
  };
  im.normal_hint = [=](double, double v) -> std::optional<AmbientVector> {
    const FiberVector n = curve->acceleration(v);
    if (n.norm() < 1e-12) return std::nullopt;
    return fiber_vector(n);
  };
  return im;
}

}  // namespace

Immersion construct(const FamilySpec& spec, const ConstructOptions& opts) {
  auto diags = validate_spec(spec);
  if (opts.allow_constant_curvature) {
    std::erase_if(diags, [](const Diagnostic& d) { return d.code == "constant-curvature-ambient"; });
  }
  if (!diags.empty()) throw InadmissibleSpecError(std::move(diags));
  if (is_rw0(spec.kind)) return build_rw0(spec);
  if (spec.kind == FamilyKind::ProductCurve) return build_product(spec);
  return build_flat_time(spec);
}

namespace {

void require_nonzero(double d, const char* what, double u, double v) {
  if (!(std::abs(d) >= 1e-10)) {
    std::ostringstream os;
    os << what << " vanishes at (" << u << ", " << v << ")";
    throw SingularPointError(os.str());
  }
}

}  // namespace

PredictedInvariants predicted_invariants(const FamilySpec& spec, double u, double v) {
  PredictedInvariants out;
  if (is_rw0(spec.kind)) {
    const WarpingFunction& f = *spec.warping;
    const auto j = f.jet(u);
    const bool spacelike = spec.kind == FamilyKind::SpacelikeRW0;
    const WarpSign sign = spacelike ? WarpSign::Minus : WarpSign::Plus;
    const double a = spec.a;
    const double inside = spacelike ? a * a - j.f * j.f : a * a + j.f * j.f;
    require_nonzero(std::max(inside, 0.0), "a^2 - f^2", u, v);
    const double root = std::sqrt(inside);
    const auto [p2, p3] = phi23_from_ode(spec.a1, spec.a2, spec.phi1, spec.v0, v, spec.phi2_0,
                                         spec.phi3_0, frame_system(spec).fixed_steps);
    const double I = warp_quadrature(f, a, sign, spec.u0, u);
    const double a1 = spec.a1(v), a2 = spec.a2(v);
    const double sqrtG = std::abs(j.f * (a1 * (I + p2) + a2 * p3 - spec.phi1.derivative(v)));
    require_nonzero(sqrtG, "sqrt(G)", u, v);
    const double f2 = j.f * j.f;
    out.omega = (j.df * sqrtG * root + a * a1 * j.f) / (sqrtG * f2);
    out.h3 = (a1 * j.f * root + a * sqrtG * j.df) / (sqrtG * f2);
    out.h4 = a2 / sqrtG;
    return out;
  }
  if (spec.kind == FamilyKind::ProductCurve) {
    const auto j = spec.warping->jet(u);
    const FiberCurve curve(spec.curve, spec.c);
    out.omega = j.df / j.f;
    out.h3 = curve.geodesic_curvature(v) / j.f;
    out.h4 = 0.0;
    return out;
  }
  const double a1 = spec.a1(v), a2 = spec.a2(v), a3 = spec.a3(v);
  const double ch = std::cosh(spec.theta0), sh = std::sinh(spec.theta0);
  switch (spec.kind) {
    case FamilyKind::SpacelikeS3: {
      const double x = u * ch, cs = std::cos(x), sn = std::sin(x);
      const double d = a1 * cs + a2 * sn;
      require_nonzero(d, "a1 cos + a2 sin", u, v);
      out.omega = ch * (a1 * sn - a2 * cs) / d;
      out.h3 = sh * (a2 * cs - a1 * sn) / d;
      out.h4 = -a3 / d;
      break;
    }
    case FamilyKind::TimelikeS3: {
      const double x = u * sh, cs = std::cos(x), sn = std::sin(x);
      const double d = a1 * cs + a2 * sn;
      require_nonzero(d, "a1 cos + a2 sin", u, v);
      out.omega = sh * (a2 * cs - a1 * sn) / d;
      out.h3 = ch * (a2 * cs - a1 * sn) / d;
      out.h4 = -a3 / d;
      break;
    }
    case FamilyKind::SpacelikeH3: {
      const double x = u * ch, cs = std::cosh(x), sn = std::sinh(x);
      const double d = a1 * cs + a2 * sn;
      require_nonzero(d, "a1 cosh + a2 sinh", u, v);
      out.omega = -ch * (a1 * sn + a2 * cs) / d;
      out.h3 = sh * (a1 * sn + a2 * cs) / d;
      out.h4 = -a3 / d;
      break;
    }
    case FamilyKind::TimelikeH3: {
      const double x = u * sh, cs = std::cosh(x), sn = std::sinh(x);
      const double d = a1 * cs + a2 * sn;
      require_nonzero(d, "a1 cosh + a2 sinh", u, v);
      out.omega = sh * (a1 * sn + a2 * cs) / d;
      out.h3 = ch * (a1 * sn + a2 * cs) / d;
      out.h4 = -a3 / d;
      break;
    }
    default: break;
  }
  return out;
}

Immersion perturb_along_normal(const RobertsonWalker& rw, const Immersion& base, double eps) {
  const FrameField frames = adapted_frame_field(rw, base);
  Immersion out = base;
  out.partials = nullptr;
  const Immersion b = base;
  out.point = [b, frames, eps](double u, double v) {
    AmbientPoint p = b.point(u, v);
    const AmbientVector n = frames(u, v).e[3];
    const double s = eps * std::sin(u);
    p.t += s * n.t0;
    p.fiber.x = project_to_model(p.fiber.c, p.fiber.x + s * n.bar);
    return p;
  };
  return out;
}

}  // namespace rwsurf
