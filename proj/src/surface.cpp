#include "rwsurf/surface.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"

namespace rwsurf {

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;

// Frame vectors and theta bundled so the stencils can difference them at once.
struct FrameSample {
  std::array<AmbientVector, 4> e;
  double theta = 0.0;

  FrameSample& operator+=(const FrameSample& o) {
    for (int i = 0; i < 4; ++i) e[i] += o.e[i];
    theta += o.theta;
    return *this;
  }
  FrameSample& operator*=(double s) {
    for (auto& x : e) x *= s;
    theta *= s;
    return *this;
  }
};
FrameSample operator+(FrameSample a, const FrameSample& b) { return a += b; }
FrameSample operator-(FrameSample a, const FrameSample& b) {
  FrameSample nb = b;
  nb *= -1.0;
  return a += nb;
}
FrameSample operator*(FrameSample a, double s) { return a *= s; }
FrameSample operator*(double s, FrameSample a) { return a *= s; }

AmbientVector as_vector(const AmbientPoint& p) { return AmbientVector{p.t, p.fiber.x}; }

AmbientPoint normalized_point(const Immersion& im, double u, double v) {
  AmbientPoint p = im.point(u, v);
  p.fiber.c = im.c;
  p.fiber.x = project_to_model(im.c, p.fiber.x);
  return p;
}

void require_stencil(const Immersion& im, double u, double v, double hu, double hv) {
  const auto& d = im.domain;
  if (!(d.u.contains_closed(u - 2 * hu) && d.u.contains_closed(u + 2 * hu) &&
        d.v.contains_closed(v - 2 * hv) && d.v.contains_closed(v + 2 * hv))) {
    throw DomainError("differencing stencil at (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") leaves the parameter rectangle");
  }
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

// Unit tangent axes of the ambient at p, projected onto the fiber model.
std::vector<AmbientVector> axis_candidates(const RobertsonWalker& rw, const AmbientPoint& p) {
  std::vector<AmbientVector> out;
  const int slots = rw.space_form() == SpaceForm::Euclidean ? 4 : 5;
  for (int k = 0; k < slots; ++k) {
    Vec5 e = Vec5::Zero();
    e[k] = 1.0;
    out.push_back(rw.tangent_project(p, AmbientVector::from_packed(e)));
  }
  return out;
}

// Candidate with the largest |<r, r>| after removing components along basis.
AmbientVector best_complement(const RobertsonWalker& rw, const AmbientPoint& p,
                              const std::vector<AmbientVector>& candidates,
                              const AmbientVector* basis, const int* eps, int count, int* out_eps) {
  double best = -1.0;
  AmbientVector pick;
  for (const auto& cand : candidates) {
    const AmbientVector r = gram_schmidt_step(rw, p, cand, basis, eps, count);
    const double q = rw.metric(p, r, r);
    if (std::abs(q) > best) {
      best = std::abs(q);
      pick = r;
    }
  }
  if (!(best > 1e-14)) throw FrameError("could not complete the orthonormal frame");
  const double q = rw.metric(p, pick, pick);
  *out_eps = sign_of(q);
  return (1.0 / std::sqrt(std::abs(q))) * pick;
}

// e4 completes e1..e3; its sign makes the 4-frame positively oriented.
void complete_frame(const RobertsonWalker& rw, const AmbientPoint& p, MovingFrame& fr) {
  fr.e[3] = best_complement(rw, p, axis_candidates(rw, p), fr.e.data(), fr.eps.data(), 3,
                            &fr.eps[3]);
  double det = 0.0;
  if (rw.space_form() == SpaceForm::Euclidean) {
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) m.col(i) = fr.e[i].packed().head<4>();
    det = m.determinant();
  } else {
    Eigen::Matrix<double, 5, 5> m;
    for (int i = 0; i < 4; ++i) m.col(i) = fr.e[i].packed();
    m.col(4) = rw.model_normal(p);
    det = m.determinant();
  }
  if (det < 0.0) fr.e[3] = -fr.e[3];
}

// e2: unit tangent orthogonal to e1, oriented like (phi_u, phi_v).
void second_tangent(const RobertsonWalker& rw, const FirstJet& j, const InducedMetric& g,
                    MovingFrame& fr) {
  AmbientVector r = gram_schmidt_step(rw, j.p, j.dv, fr.e.data(), fr.eps.data(), 1);
  double q = rw.metric(j.p, r, r);
  const AmbientVector ru = gram_schmidt_step(rw, j.p, j.du, fr.e.data(), fr.eps.data(), 1);
  const double qu = rw.metric(j.p, ru, ru);
  if (std::abs(qu) > std::abs(q)) {
    r = ru;
    q = qu;
  }
  if (!(std::abs(q) > 1e-14)) throw DegenerateError("tangent plane is degenerate");
  fr.eps[1] = sign_of(q);
  fr.e[1] = (1.0 / std::sqrt(std::abs(q))) * r;
  const auto c1 = tangent_coefficients(rw, j, g, fr.e[0]);
  const auto c2 = tangent_coefficients(rw, j, g, fr.e[1]);
  if (c1[0] * c2[1] - c1[1] * c2[0] < 0.0) fr.e[1] = -fr.e[1];
}

}  // namespace

Immersion without_analytic_partials(Immersion base) {
  base.partials = nullptr;
  return base;
}

std::string to_string(CausalType type) {
  switch (type) {
    case CausalType::Spacelike: return "spacelike";
    case CausalType::Timelike: return "timelike";
    case CausalType::Degenerate: return "degenerate";
  }
  return "unknown";
}

FirstJet first_jet(const Immersion& im, double u, double v, const DiffOptions& opts) {
  FirstJet j;
  j.p = normalized_point(im, u, v);
  RobertsonWalker flat(WarpingFunction::constant(1.0, {-1e300, 1e300}), im.c);
  if (im.partials) {
    const auto d = im.partials(u, v);
    j.du = flat.tangent_project(j.p, d[0]);
    j.dv = flat.tangent_project(j.p, d[1]);
    return j;
  }
  const double hu = opts.at(u), hv = opts.at(v);
  require_stencil(im, u, v, hu, hv);
  j.du = flat.tangent_project(
      j.p, numdiff::central4([&](double s) { return as_vector(normalized_point(im, s, v)); }, u,
                             hu));
  j.dv = flat.tangent_project(
      j.p, numdiff::central4([&](double s) { return as_vector(normalized_point(im, u, s)); }, v,
                             hv));
  return j;
}

SurfaceJet2 jet(const Immersion& im, double u, double v, const DiffOptions& opts) {
  const FirstJet first = first_jet(im, u, v, opts);
  // Differenced first partials already carry roundoff, so differencing them
  // again uses the coarser step.
  const double hu = im.has_analytic_partials() ? opts.at(u) : std::max(opts.second_step, opts.at(u));
  const double hv = im.has_analytic_partials() ? opts.at(v) : std::max(opts.second_step, opts.at(v));
  const double margin_u = im.has_analytic_partials() ? hu : hu + 2 * opts.at(u);
  const double margin_v = im.has_analytic_partials() ? hv : hv + 2 * opts.at(v);
  require_stencil(im, u, v, margin_u, margin_v);
  SurfaceJet2 j;
  j.p = first.p;
  j.du = first.du;
  j.dv = first.dv;
  j.duu = numdiff::central4([&](double s) { return first_jet(im, s, v, opts).du; }, u, hu);
  j.duv = numdiff::central4([&](double s) { return first_jet(im, u, s, opts).du; }, v, hv);
  j.dvv = numdiff::central4([&](double s) { return first_jet(im, u, s, opts).dv; }, v, hv);
  const Vec5 r = j.du.packed();
  const Vec5 s = j.dv.packed();
  if ((r * r.norm() - s * (s.dot(r) / std::max(s.norm(), 1e-300))).norm() < 1e-12 * r.norm() * r.norm() ||
      r.norm() < 1e-14 || s.norm() < 1e-14) {
    throw ImmersionError("Jacobian is rank deficient at (" + std::to_string(u) + ", " +
                         std::to_string(v) + ")");
  }
  return j;
}

InducedMetric induced_metric(const RobertsonWalker& rw, const AmbientPoint& p,
                             const AmbientVector& du, const AmbientVector& dv) {
  InducedMetric g;
  g.g11 = rw.metric(p, du, du);
  g.g12 = rw.metric(p, du, dv);
  g.g22 = rw.metric(p, dv, dv);
  const double det = g.det();
  if (det > kDegenerateDet) {
    g.type = CausalType::Spacelike;
  } else if (det < -kDegenerateDet) {
    g.type = CausalType::Timelike;
  } else {
    g.type = CausalType::Degenerate;
  }
  return g;
}

AmbientVector gram_schmidt_step(const RobertsonWalker& rw, const AmbientPoint& p, AmbientVector v,
                                const AmbientVector* basis, const int* eps, int count) {
  for (int k = 0; k < count; ++k) {
    v -= (eps[k] * rw.metric(p, v, basis[k])) * basis[k];
  }
  return v;
}

std::array<double, 2> tangent_coefficients(const RobertsonWalker& rw, const FirstJet& j,
                                           const InducedMetric& g, const AmbientVector& x) {
  const double bu = rw.metric(j.p, x, j.du);
  const double bv = rw.metric(j.p, x, j.dv);
  const double det = g.det();
  return {(g.g22 * bu - g.g12 * bv) / det, (g.g11 * bv - g.g12 * bu) / det};
}

TEtaSplit t_eta_split(const RobertsonWalker& rw, const AmbientPoint& p, const MovingFrame& fr) {
  const AmbientVector tau = AmbientVector::d_dt();
  TEtaSplit out;
  for (int i = 0; i < 2; ++i) out.T += (fr.eps[i] * rw.metric(p, tau, fr.e[i])) * fr.e[i];
  out.eta = tau - out.T;
  return out;
}

MovingFrame adapted_frame(const RobertsonWalker& rw, const FirstJet& j,
                          const std::optional<AmbientVector>& normal_hint) {
  const InducedMetric g = induced_metric(rw, j.p, j.du, j.dv);
  if (g.type == CausalType::Degenerate) throw DegenerateError("induced metric is degenerate");
  const AmbientVector tau = AmbientVector::d_dt();
  const auto tc = tangent_coefficients(rw, j, g, tau);
  const AmbientVector T = tc[0] * j.du + tc[1] * j.dv;
  const AmbientVector eta = tau - T;
  const double tt = rw.metric(j.p, T, T);

  MovingFrame fr;
  fr.type = g.type;
  fr.adapted = true;
  if (g.type == CausalType::Spacelike) {
    if (!(std::sqrt(std::max(tt, 0.0)) > 1e-8)) {
      throw FrameError("horizontal point: d/dt is normal to the surface");
    }
    fr.eps = {1, 1, -1, 1};
    fr.e[0] = (1.0 / std::sqrt(tt)) * T;
    second_tangent(rw, j, g, fr);
    const double nn = -rw.metric(j.p, eta, eta);
    fr.e[2] = (1.0 / std::sqrt(nn)) * eta;
    fr.theta = std::asinh(rw.metric(j.p, tau, fr.e[0]));
  } else {
    if (!(tt < 0.0)) throw FrameError("tangential part of d/dt is not timelike");
    fr.eps = {-1, 1, 1, 1};
    fr.e[0] = (1.0 / std::sqrt(-tt)) * T;
    second_tangent(rw, j, g, fr);
    const double nn = rw.metric(j.p, eta, eta);
    if (std::sqrt(std::max(nn, 0.0)) > 1e-8) {
      fr.e[2] = (1.0 / std::sqrt(nn)) * eta;
    } else {
      fr.eta_vanishes = true;
      std::vector<AmbientVector> candidates;
      if (normal_hint) {
        const AmbientVector r =
            gram_schmidt_step(rw, j.p, rw.tangent_project(j.p, *normal_hint), fr.e.data(),
                              fr.eps.data(), 2);
        if (std::abs(rw.metric(j.p, r, r)) > 1e-12) candidates.push_back(r);
      }
      if (candidates.empty()) candidates = axis_candidates(rw, j.p);
      int e3_eps = 1;
      fr.e[2] = best_complement(rw, j.p, candidates, fr.e.data(), fr.eps.data(), 2, &e3_eps);
    }
    fr.theta = std::asinh(rw.metric(j.p, tau, fr.e[2]));
  }
  complete_frame(rw, j.p, fr);
  return fr;
}

MovingFrame coordinate_frame(const RobertsonWalker& rw, const FirstJet& j) {
  const InducedMetric g = induced_metric(rw, j.p, j.du, j.dv);
  if (g.type == CausalType::Degenerate) throw DegenerateError("induced metric is degenerate");
  MovingFrame fr;
  fr.type = g.type;
  fr.adapted = false;
  if (!(std::abs(g.g11) > 1e-14)) throw DegenerateError("phi_u is null");
  fr.eps[0] = sign_of(g.g11);
  fr.e[0] = (1.0 / std::sqrt(std::abs(g.g11))) * j.du;
  second_tangent(rw, j, g, fr);
  fr.e[2] = best_complement(rw, j.p, axis_candidates(rw, j.p), fr.e.data(), fr.eps.data(), 2,
                            &fr.eps[2]);
  complete_frame(rw, j.p, fr);
  fr.theta = 0.0;
  return fr;
}

FrameField adapted_frame_field(const RobertsonWalker& rw, const Immersion& immersion,
                               const DiffOptions& opts) {
  return [rw, immersion, opts](double u, double v) {
    std::optional<AmbientVector> hint;
    if (immersion.normal_hint) hint = immersion.normal_hint(u, v);
    return adapted_frame(rw, first_jet(immersion, u, v, opts), hint);
  };
}

FrameField coordinate_frame_field(const RobertsonWalker& rw, const Immersion& immersion,
                                  const DiffOptions& opts) {
  return [rw, immersion, opts](double u, double v) {
    return coordinate_frame(rw, first_jet(immersion, u, v, opts));
  };
}

FrameConnection frame_connection(const RobertsonWalker& rw, const Immersion& immersion,
                                 const FrameField& frames, double u, double v,
                                 const DiffOptions& opts) {
  FrameConnection fc;
  fc.jet = first_jet(immersion, u, v, opts);
  fc.metric = induced_metric(rw, fc.jet.p, fc.jet.du, fc.jet.dv);
  if (fc.metric.type == CausalType::Degenerate) {
    throw DegenerateError("induced metric is degenerate");
  }
  fc.frame = frames(u, v);
  const double hu = opts.at(u), hv = opts.at(v);
  // Frames built from differenced partials need room for both stencils.
  const double extra = immersion.has_analytic_partials() ? 0.0 : 1.0;
  require_stencil(immersion, u, v, hu * (1.0 + extra), hv * (1.0 + extra));

  auto sample = [&](double uu, double vv) {
    const MovingFrame f = frames(uu, vv);
    return FrameSample{f.e, f.theta};
  };
  const FrameSample d_u = numdiff::central4([&](double s) { return sample(s, v); }, u, hu);
  const FrameSample d_v = numdiff::central4([&](double s) { return sample(u, s); }, v, hv);

  std::array<AmbientVector, 4> nabla_u, nabla_v;
  for (int k = 0; k < 4; ++k) {
    nabla_u[k] = rw.connection(fc.jet.p, fc.jet.du, fc.frame.e[k], d_u.e[k]);
    nabla_v[k] = rw.connection(fc.jet.p, fc.jet.dv, fc.frame.e[k], d_v.e[k]);
  }
  for (int i = 0; i < 2; ++i) {
    fc.coeffs[i] = tangent_coefficients(rw, fc.jet, fc.metric, fc.frame.e[i]);
    fc.dtheta[i] = fc.coeffs[i][0] * d_u.theta + fc.coeffs[i][1] * d_v.theta;
    for (int k = 0; k < 4; ++k) {
      fc.nabla[i][k] = fc.coeffs[i][0] * nabla_u[k] + fc.coeffs[i][1] * nabla_v[k];
      for (int m = 0; m < 4; ++m) {
        fc.gamma[i][k][m] = rw.metric(fc.jet.p, fc.nabla[i][k], fc.frame.e[m]);
      }
    }
  }
  return fc;
}

FundamentalForms second_fundamental_form(const RobertsonWalker& rw, const FrameConnection& fc) {
  FundamentalForms out;
  out.g11 = fc.metric.g11;
  out.g12 = fc.metric.g12;
  out.g22 = fc.metric.g22;
  out.frame = fc.frame;
  for (int a = 0; a < 2; ++a) {
    for (int i = 0; i < 2; ++i) {
      for (int k = 0; k < 2; ++k) {
        out.h[a](i, k) = fc.frame.eps[2 + a] * fc.gamma[i][k][2 + a];
      }
    }
  }
  const TEtaSplit split = t_eta_split(rw, fc.jet.p, fc.frame);
  out.T = split.T;
  out.eta = split.eta;
  return out;
}

FundamentalForms second_fundamental_form(const RobertsonWalker& rw, const Immersion& immersion,
                                         double u, double v, const FrameField& frames,
                                         const DiffOptions& opts) {
  return second_fundamental_form(rw, frame_connection(rw, immersion, frames, u, v, opts));
}

CoordinateForms coordinate_second_fundamental_form(const RobertsonWalker& rw,
                                                   const SurfaceJet2& j) {
  const FirstJet first{j.p, j.du, j.dv};
  const InducedMetric g = induced_metric(rw, j);
  if (g.type == CausalType::Degenerate) throw DegenerateError("induced metric is degenerate");
  auto normal_part = [&](const AmbientVector& x) {
    const auto c = tangent_coefficients(rw, first, g, x);
    return x - c[0] * j.du - c[1] * j.dv;
  };
  CoordinateForms out;
  out.huu = normal_part(rw.connection(j.p, j.du, j.du, j.duu));
  out.huv = normal_part(rw.connection(j.p, j.du, j.dv, j.duv));
  out.hvv = normal_part(rw.connection(j.p, j.dv, j.dv, j.dvv));
  return out;
}

Eigen::Matrix2d shape_operator(const FundamentalForms& forms, int alpha) {
  if (alpha != 3 && alpha != 4) throw std::invalid_argument("shape_operator: alpha must be 3 or 4");
  const auto& h = forms.h[alpha - 3];
  const int ea = forms.frame.eps[alpha - 1];
  Eigen::Matrix2d m;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) m(k, i) = forms.frame.eps[k] * ea * h(i, k);
  }
  return m;
}

int relative_nullity_dim(const std::array<Eigen::Matrix2d, 2>& h, double tol, double tol_abs) {
  Eigen::Matrix<double, 4, 2> stacked;
  stacked << h[0], h[1];
  const Eigen::JacobiSVD<Eigen::Matrix<double, 4, 2>> svd(stacked);
  const auto& s = svd.singularValues();
  const double threshold = std::max(tol * s[0], tol_abs);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) {
    if (s[i] > threshold) ++rank;
  }
  return 2 - rank;
}

int relative_nullity_dim(const FundamentalForms& forms, double tol, double tol_abs) {
  return relative_nullity_dim(forms.h, tol, tol_abs);
}

AmbientVector mean_curvature_vector(const FundamentalForms& forms) {
  AmbientVector H;
  for (int i = 0; i < 2; ++i) {
    for (int a = 0; a < 2; ++a) {
      H += (0.5 * forms.frame.eps[i] * forms.h[a](i, i)) * forms.frame.e[2 + a];
    }
  }
  return H;
}

}  // namespace rwsurf
