#include "rwsurf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "rwsurf/errors.hpp"
#include "rwsurf/numdiff.hpp"

namespace rwsurf {

double default_grid_margin(const ParameterRect& domain, const DiffOptions& opts,
                           double codazzi_step) {
  const double big = std::max({std::abs(domain.u.lo), std::abs(domain.u.hi),
                               std::abs(domain.v.lo), std::abs(domain.v.hi)});
  return 2.0 * std::max(codazzi_step, opts.second_step) + 6.0 * opts.at(big);
}

Grid make_grid(const ParameterRect& domain, int nu, int nv, double margin) {
  if (nu < 1 || nv < 1) throw ConfigError("grid needs at least one node per direction");
  const double m = margin < 0.0 ? default_grid_margin(domain) : margin;
  Grid g;
  g.nu = nu;
  g.nv = nv;
  g.rect = {{domain.u.lo + m, domain.u.hi - m}, {domain.v.lo + m, domain.v.hi - m}};
  if (!(g.rect.u.hi >= g.rect.u.lo) || !(g.rect.v.hi >= g.rect.v.lo)) {
    throw ConfigError("parameter rectangle too small for the stencil margin");
  }
  return g;
}

Tolerances Tolerances::with_global(double tol) const {
  Tolerances t = *this;
  t.prn = t.frame = t.theta = t.theta0_fit = t.codazzi = t.closed_form = t.closed_form_differenced =
      t.ricci = t.curvature = t.compatibility = t.torsion = t.mesh_prn = t.mesh_theta = tol;
  return t;
}

void CheckResult::record(double residual, double u, double v) {
  ++evaluated;
  if (std::isnan(max_residual)) return;
  if (!argmax || std::isnan(residual) || residual > max_residual) {
    max_residual = residual;
    argmax = std::make_pair(u, v);
  }
}

int CheckResult::skipped_total() const {
  int n = 0;
  for (const auto& [k, c] : skipped) n += c;
  return n;
}

void CheckResult::finalize() {
  pass = error.empty() && evaluated > 0 && max_residual <= tolerance;
}

nlohmann::json CheckResult::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["grid"] = {nu, nv};
  j["evaluated"] = evaluated;
  j["skipped"] = skipped;
  j["skipped_total"] = skipped_total();
  j["max_residual"] = max_residual;
  j["argmax"] = argmax ? nlohmann::json{argmax->first, argmax->second} : nlohmann::json(nullptr);
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  if (!error.empty()) j["error"] = error;
  j["extras"] = extras;
  return j;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["pass"] = all_pass();
  j["conventions"] = conventions;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) j["checks"].push_back(c.to_json());
  return j;
}

namespace {

CheckResult new_check(const std::string& name, const Grid& grid, double tolerance) {
  CheckResult r;
  r.name = name;
  r.nu = grid.nu;
  r.nv = grid.nv;
  r.tolerance = tolerance;
  return r;
}

PointSample sample_point(const RobertsonWalker& rw, const Immersion& immersion,
                         const FrameField& frames, double u, double v, const DiffOptions& opts) {
  PointSample s;
  s.u = u;
  s.v = v;
  try {
    s.fc = frame_connection(rw, immersion, frames, u, v, opts);
    s.p = s.fc->jet.p;
    s.forms = second_fundamental_form(rw, *s.fc);
  } catch (const DegenerateError& e) {
    s.status = "degenerate";
    s.message = e.what();
  } catch (const FrameError& e) {
    s.status = std::string(e.what()).find("horizontal") != std::string::npos ? "horizontal" : "frame";
    s.message = e.what();
  } catch (const DomainError& e) {
    s.status = "domain";
    s.message = e.what();
  } catch (const GeometryError& e) {
    s.status = "error";
    s.message = e.what();
  }
  if (!s.ok()) s.fc.reset();
  return s;
}

}  // namespace

SampleSet sample_grid(const RobertsonWalker& rw, const Immersion& immersion,
                      const FrameField& frames, const Grid& grid, const DiffOptions& opts) {
  SampleSet out;
  out.grid = grid;
  out.points.reserve(static_cast<std::size_t>(grid.nu) * grid.nv);
  for (int i = 0; i < grid.nu; ++i) {
    for (int j = 0; j < grid.nv; ++j) {
      out.points.push_back(sample_point(rw, immersion, frames, grid.u(i), grid.v(j), opts));
    }
  }
  return out;
}

FundamentalForms forms_from_coordinate(const RobertsonWalker& rw, const SurfaceJet2& jet,
                                       const MovingFrame& frame) {
  const FirstJet first{jet.p, jet.du, jet.dv};
  const InducedMetric g = induced_metric(rw, jet);
  const CoordinateForms cf = coordinate_second_fundamental_form(rw, jet);
  std::array<std::array<double, 2>, 2> c;
  for (int i = 0; i < 2; ++i) c[i] = tangent_coefficients(rw, first, g, frame.e[i]);
  FundamentalForms out;
  out.g11 = g.g11;
  out.g12 = g.g12;
  out.g22 = g.g22;
  out.frame = frame;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) {
      const AmbientVector hik = (c[i][0] * c[k][0]) * cf.huu +
                                (c[i][0] * c[k][1] + c[i][1] * c[k][0]) * cf.huv +
                                (c[i][1] * c[k][1]) * cf.hvv;
      for (int a = 0; a < 2; ++a) {
        out.h[a](i, k) = frame.eps[2 + a] * rw.metric(jet.p, hik, frame.e[2 + a]);
      }
    }
  }
  const TEtaSplit split = t_eta_split(rw, jet.p, frame);
  out.T = split.T;
  out.eta = split.eta;
  return out;
}

namespace {

using Vec5 = Eigen::Matrix<double, 5, 1>;

Vec5 packed_point(const AmbientPoint& p) {
  Vec5 x;
  x << p.t, p.fiber.x;
  return x;
}

constexpr double kD1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD2[7] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};

}  // namespace

SampleSet sample_mesh(const RobertsonWalker& rw, const MeshGrid& mesh) {
  const int nu = static_cast<int>(mesh.us.size());
  const int nv = static_cast<int>(mesh.vs.size());
  if (nu < 7 || nv < 7) throw ConfigError("mesh mode needs at least 7 nodes per direction");
  auto spacing = [](const std::vector<double>& xs) {
    const double h = (xs.back() - xs.front()) / (static_cast<double>(xs.size()) - 1.0);
    for (std::size_t k = 1; k < xs.size(); ++k) {
      if (std::abs(xs[k] - xs[k - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) {
        throw ConfigError("mesh nodes must be uniformly spaced");
      }
    }
    return h;
  };
  const double hu = spacing(mesh.us), hv = spacing(mesh.vs);
  auto X = [&](int i, int j) { return packed_point(mesh.at(i, j)); };
  auto d_v = [&](int i, int j) {
    Vec5 acc = Vec5::Zero();
    for (int k = 0; k < 7; ++k) acc += kD1[k] * X(i, j + k - 3);
    return Vec5(acc / hv);
  };

  SampleSet out;
  out.grid.nu = nu;
  out.grid.nv = nv;
  out.grid.rect = {{mesh.us.front(), mesh.us.back()}, {mesh.vs.front(), mesh.vs.back()}};
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      PointSample s;
      s.u = mesh.us[i];
      s.v = mesh.vs[j];
      s.p = mesh.at(i, j);
      if (i < 3 || j < 3 || i >= nu - 3 || j >= nv - 3) {
        s.status = "boundary";
        out.points.push_back(s);
        continue;
      }
      Vec5 du = Vec5::Zero(), duu = Vec5::Zero(), dvv = Vec5::Zero(), duv = Vec5::Zero();
      for (int k = 0; k < 7; ++k) {
        du += kD1[k] * X(i + k - 3, j);
        duu += kD2[k] * X(i + k - 3, j);
        dvv += kD2[k] * X(i, j + k - 3);
        duv += kD1[k] * d_v(i + k - 3, j);
      }
      SurfaceJet2 jet;
      jet.p = s.p;
      jet.du = rw.tangent_project(s.p, AmbientVector::from_packed(du / hu));
      jet.dv = rw.tangent_project(s.p, AmbientVector::from_packed(d_v(i, j)));
      jet.duu = AmbientVector::from_packed(duu / (hu * hu));
      jet.dvv = AmbientVector::from_packed(dvv / (hv * hv));
      jet.duv = AmbientVector::from_packed(duv / hu);
      try {
        const MovingFrame frame = adapted_frame(rw, jet);
        s.forms = forms_from_coordinate(rw, jet, frame);
      } catch (const DegenerateError& e) {
        s.status = "degenerate";
        s.message = e.what();
      } catch (const FrameError& e) {
        s.status = std::string(e.what()).find("horizontal") != std::string::npos ? "horizontal" : "frame";
        s.message = e.what();
      } catch (const GeometryError& e) {
        s.status = "error";
        s.message = e.what();
      }
      out.points.push_back(s);
    }
  }
  return out;
}

namespace {

double normal_norm(const FundamentalForms& f, int i, int k) {
  return std::hypot(f.h[0](i, k), f.h[1](i, k));
}

// Reports "no adapted frame anywhere" as an error instead of a silent pass.
bool require_frames(const SampleSet& samples, CheckResult& r) {
  for (const auto& s : samples.points) {
    if (s.ok()) return true;
  }
  std::map<std::string, int> reasons;
  for (const auto& s : samples.points) ++reasons[s.status];
  const bool horizontal = reasons["horizontal"] > 0;
  r.error = horizontal ? "horizontal surface: d/dt is normal, no adapted frame exists"
                       : "no grid point admits an adapted frame";
  for (const auto& s : samples.points) r.skip(s.status);
  return false;
}

}  // namespace

CheckResult check_prn(const SampleSet& samples, const Tolerances& tol) {
  CheckResult r = new_check("prn", samples.grid, tol.prn);
  if (!require_frames(samples, r)) {
    r.finalize();
    return r;
  }
  std::map<int, int> histogram;
  for (const auto& s : samples.points) {
    if (!s.ok()) {
      r.skip(s.status);
      continue;
    }
    const auto& f = s.forms;
    const double res = (normal_norm(f, 0, 0) + normal_norm(f, 0, 1)) /
                       (normal_norm(f, 1, 1) + tol.prn_floor);
    r.record(res, s.u, s.v);
    ++histogram[relative_nullity_dim(f, tol.nullity_rel, tol.nullity_abs)];
  }
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [dim, count] : histogram) hist[std::to_string(dim)] = count;
  r.extras["nullity_histogram"] = hist;
  r.extras["floor"] = tol.prn_floor;
  r.finalize();
  return r;
}

CheckResult check_frame_equations(const RobertsonWalker& rw, const SampleSet& samples,
                                  const Tolerances& tol) {
  CheckResult r = new_check("frame", samples.grid, tol.frame);
  if (!require_frames(samples, r)) {
    r.finalize();
    return r;
  }
  std::map<std::string, double> worst;
  for (const auto& s : samples.points) {
    if (!s.ok()) {
      r.skip(s.status);
      continue;
    }
    if (!s.fc) {
      r.skip("no-connection");
      continue;
    }
    const FrameConnection& fc = *s.fc;
    const MovingFrame& fr = fc.frame;
    if (!fr.adapted) {
      r.skip("not-adapted");
      continue;
    }
    const auto j = rw.warping().jet(fc.jet.p.t);
    const double W = j.df / j.f;
    const bool spacelike = fr.type == CausalType::Spacelike;
    auto coef = [&](int i, int k, int m) { return fr.eps[m] * fc.gamma[i][k][m]; };
    double point_worst = 0.0;
    auto identity = [&](const std::string& name, int i, int k, std::array<double, 4> target) {
      double res = 0.0;
      for (int m = 0; m < 4; ++m) res = std::max(res, std::abs(coef(i, k, m) - target[m]));
      worst[name] = std::max(worst[name], res);
      point_worst = std::max(point_worst, res);
    };
    auto scalar = [&](const std::string& name, double res) {
      worst[name] = std::max(worst[name], std::abs(res));
      point_worst = std::max(point_worst, std::abs(res));
    };
    const double th = fr.theta;
    if (fr.eta_vanishes) {
      identity("nabla_e1_e1", 0, 0, {0, 0, 0, 0});
      identity("nabla_e2_e1", 1, 0, {0, W, 0, 0});
      scalar("e1_theta", fc.dtheta[0] + W * std::sinh(th));
      scalar("e2_theta", fc.dtheta[1]);
    } else {
      const double omega = coef(1, 0, 1);
      const double h3 = coef(1, 1, 2);
      const double h4 = coef(1, 1, 3);
      identity("nabla_e1_e1", 0, 0, {0, 0, 0, 0});
      identity("nabla_e2_e1", 1, 0, {0, omega, 0, 0});
      identity("nabla_e1_e2", 0, 1, {0, 0, 0, 0});
      identity("nabla_e2_e2", 1, 1, {spacelike ? -omega : omega, 0, h3, h4});
      identity("nabla_e1_e3", 0, 2, {0, 0, 0, 0});
      identity("nabla_e2_e3", 1, 2, {0, spacelike ? h3 : -h3, 0, 0});
      identity("nabla_e1_e4", 0, 3, {0, 0, 0, 0});
      identity("nabla_e2_e4", 1, 3, {0, -h4, 0, 0});
      scalar("e1_theta", spacelike ? fc.dtheta[0] - W * std::cosh(th)
                                   : fc.dtheta[0] + W * std::sinh(th));
      scalar("e2_theta", fc.dtheta[1]);
    }
    r.record(point_worst, s.u, s.v);
  }
  r.extras["identities"] = worst;
  r.finalize();
  return r;
}

CheckResult check_theta_law(const RobertsonWalker& rw, const SampleSet& samples,
                            const Tolerances& tol, std::optional<double> expected) {
  const bool theta_mode = rw.warping().family() == WarpingFunction::Family::Constant;
  CheckResult r = new_check("theta", samples.grid, tol.theta);
  if (!require_frames(samples, r)) {
    r.finalize();
    return r;
  }
  std::vector<std::pair<const PointSample*, double>> values;
  for (const auto& s : samples.points) {
    if (!s.ok()) {
      r.skip(s.status);
      continue;
    }
    const MovingFrame& fr = s.forms.frame;
    if (!fr.adapted) {
      r.skip("not-adapted");
      continue;
    }
    const double f = rw.warping().value(s.p.t);
    double value = fr.theta;
    if (!theta_mode) {
      value = fr.type == CausalType::Spacelike ? std::cosh(fr.theta) * f : std::sinh(fr.theta) * f;
    }
    values.emplace_back(&s, value);
  }
  // Least-squares fit of a single constant is the mean.
  double fit = 0.0;
  for (const auto& [s, x] : values) fit += x;
  if (!values.empty()) fit /= static_cast<double>(values.size());
  for (const auto& [s, x] : values) r.record(std::abs(x - fit), s->u, s->v);
  r.extras["mode"] = theta_mode ? "theta - theta0" : "cosh(theta) f - a (spacelike) / sinh(theta) f - a (timelike)";
  r.extras["fitted"] = fit;
  r.finalize();
  if (expected) {
    const double fit_tol = theta_mode ? tol.theta0_fit : tol.theta;
    const double err = std::abs(fit - *expected);
    r.extras["expected"] = *expected;
    r.extras["fit_error"] = err;
    r.extras["fit_tolerance"] = fit_tol;
    if (!(err <= fit_tol)) r.pass = false;
  }
  return r;
}

namespace {

using FormComponents = Eigen::Matrix<double, 8, 1>;

FormComponents pack_forms(const FundamentalForms& f) {
  FormComponents x;
  x << f.h[0](0, 0), f.h[0](0, 1), f.h[0](1, 0), f.h[0](1, 1), f.h[1](0, 0), f.h[1](0, 1),
      f.h[1](1, 0), f.h[1](1, 1);
  return x;
}

double comp(const FormComponents& x, int alpha, int i, int k) { return x[alpha * 4 + i * 2 + k]; }

}  // namespace

CheckResult check_codazzi(const RobertsonWalker& rw, const Immersion& immersion,
                          const FrameField& frames, const SampleSet& samples,
                          const Tolerances& tol, const DiffOptions& opts) {
  CheckResult r = new_check("codazzi", samples.grid, tol.codazzi);
  const double H = tol.codazzi_step;
  double max_lhs = 0.0;
  for (const auto& s : samples.points) {
    if (!s.ok() || !s.fc) {
      r.skip(s.ok() ? "no-connection" : s.status);
      continue;
    }
    const FrameConnection& fc = *s.fc;
    const MovingFrame& fr = fc.frame;
    FormComponents dhu, dhv;
    try {
      auto forms_at = [&](double u, double v) {
        return pack_forms(second_fundamental_form(rw, immersion, u, v, frames, opts));
      };
      dhu = numdiff::central4([&](double x) { return forms_at(x, s.v); }, s.u, H);
      dhv = numdiff::central4([&](double x) { return forms_at(s.u, x); }, s.v, H);
    } catch (const GeometryError& e) {
      r.skip("neighbor");
      continue;
    }
    const FormComponents h0 = pack_forms(s.forms);
    // e_k(h^alpha_ij)
    FormComponents dh[2];
    for (int k = 0; k < 2; ++k) dh[k] = fc.coeffs[k][0] * dhu + fc.coeffs[k][1] * dhv;
    auto g = [&](int i, int k, int m) { return fc.gamma[i][k][m]; };
    auto eps = [&](int m) { return static_cast<double>(fr.eps[m]); };
    // ((nabla_{e_k} h)(e_j, e_l))^alpha
    auto term = [&](int k, int j, int l, int alpha) {
      double out = comp(dh[k], alpha, j, l);
      for (int beta = 0; beta < 2; ++beta) {
        out += comp(h0, beta, j, l) * eps(2 + alpha) * g(k, 2 + beta, 2 + alpha);
      }
      for (int i = 0; i < 2; ++i) {
        out -= eps(i) * g(k, j, i) * comp(h0, alpha, i, l);
        out -= eps(i) * g(k, l, i) * comp(h0, alpha, j, i);
      }
      return out;
    };
    const auto jet = rw.warping().jet(fc.jet.p.t);
    const double D = -jet.d2f / jet.f + rw.vertical_curvature(fc.jet.p.t);
    const AmbientVector tau = AmbientVector::d_dt();
    auto lhs = [&](int x, int y, int alpha) {
      const double xx = eps(x);
      const double xy = 0.0;
      const double x0 = -rw.metric(fc.jet.p, tau, fr.e[x]);
      const double y0 = -rw.metric(fc.jet.p, tau, fr.e[y]);
      const double eta_alpha = eps(2 + alpha) * rw.metric(fc.jet.p, s.forms.eta, fr.e[2 + alpha]);
      return (xx * y0 - xy * x0) * D * eta_alpha;
    };
    double res = 0.0;
    for (const auto& [x, y] : {std::pair{0, 1}, std::pair{1, 0}}) {
      for (int alpha = 0; alpha < 2; ++alpha) {
        const double left = lhs(x, y, alpha);
        max_lhs = std::max(max_lhs, std::abs(left));
        res = std::max(res, std::abs(term(x, y, x, alpha) - term(y, x, x, alpha) - left));
      }
    }
    r.record(res, s.u, s.v);
  }
  r.extras["max_curvature_side"] = max_lhs;
  r.extras["outer_step"] = H;
  r.finalize();
  return r;
}

double ricci_commutator_norm(const FundamentalForms& forms) {
  const Eigen::Matrix2d A3 = shape_operator(forms, 3);
  const Eigen::Matrix2d A4 = shape_operator(forms, 4);
  return (A3 * A4 - A4 * A3).norm();
}

CheckResult check_ricci_flatness_consistency(const SampleSet& samples, const Tolerances& tol) {
  CheckResult r = new_check("ricci", samples.grid, tol.ricci);
  for (const auto& s : samples.points) {
    if (!s.ok()) {
      r.skip(s.status);
      continue;
    }
    r.record(ricci_commutator_norm(s.forms), s.u, s.v);
  }
  r.extras["norm"] = "Frobenius norm of [A_3, A_4]";
  r.finalize();
  return r;
}

CheckResult compare_closed_form(const FamilySpec& spec, const SampleSet& samples, double tol) {
  CheckResult r = new_check("closed_form", samples.grid, tol);
  if (!require_frames(samples, r)) {
    r.finalize();
    return r;
  }
  double worst[3] = {0, 0, 0};
  int agree[3] = {0, 0, 0}, disagree[3] = {0, 0, 0};
  for (const auto& s : samples.points) {
    if (!s.ok()) {
      r.skip(s.status);
      continue;
    }
    if (!s.fc) {
      r.skip("no-connection");
      continue;
    }
    PredictedInvariants pred;
    try {
      pred = predicted_invariants(spec, s.u, s.v);
    } catch (const SingularPointError&) {
      r.skip("singular");
      continue;
    }
    const MovingFrame& fr = s.fc->frame;
    const double num[3] = {fr.eps[1] * s.fc->gamma[1][0][1], fr.eps[2] * s.forms.h[0](1, 1),
                           fr.eps[3] * s.forms.h[1](1, 1)};
    const double want[3] = {pred.omega, pred.h3, pred.h4};
    double res = 0.0;
    for (int q = 0; q < 3; ++q) {
      const double d = std::abs(std::abs(num[q]) - std::abs(want[q]));
      worst[q] = std::max(worst[q], d);
      res = std::max(res, d);
      if (std::abs(want[q]) > 1e-6) (num[q] * want[q] > 0 ? agree : disagree)[q]++;
    }
    r.record(res, s.u, s.v);
  }
  const char* names[3] = {"omega", "h3_22", "h4_22"};
  for (int q = 0; q < 3; ++q) {
    r.extras[names[q]] = worst[q];
    std::string sign = "n/a";
    if (agree[q] && !disagree[q]) sign = "same";
    if (!agree[q] && disagree[q]) sign = "opposite";
    if (agree[q] && disagree[q]) sign = "mixed";
    r.extras[std::string("sign_") + names[q]] = sign;
  }
  r.extras["comparison"] = "| |numeric| - |predicted| |";
  r.finalize();
  return r;
}

namespace {

// Chart psi(y) = (t0 + y0, N(x0 + y1 E1 + y2 E2 + y3 E3)) around a random
// point, N the radial normalization onto the model.
struct Chart {
  SpaceForm c;
  double t0;
  FiberVector x0;
  std::array<FiberVector, 3> E;

  FiberVector raw(const Eigen::Vector4d& y) const {
    return x0 + y[1] * E[0] + y[2] * E[1] + y[3] * E[2];
  }
  AmbientPoint point(const Eigen::Vector4d& y) const {
    return AmbientPoint{t0 + y[0], FiberPoint{c, project_to_model(c, raw(y))}};
  }
  // d psi_y (w)
  AmbientVector push(const Eigen::Vector4d& y, const Eigen::Vector4d& w) const {
    const FiberVector x = raw(y);
    const FiberVector dx = w[1] * E[0] + w[2] * E[1] + w[3] * E[2];
    if (c == SpaceForm::Euclidean) return AmbientVector{w[0], dx};
    const double k = curvature(c);
    const double s = std::sqrt(k * embedding_inner(c, x, x));
    return AmbientVector{w[0], dx / s - (k * embedding_inner(c, x, dx) / (s * s * s)) * x};
  }
};

Interval sample_range(const WarpingFunction& f) {
  Interval d = f.domain();
  d.lo = std::max(d.lo, -1.0);
  d.hi = std::min(d.hi, 1.0);
  const double pad = 0.2 * d.length();
  return {d.lo + pad, d.hi - pad};
}

Chart random_chart(const RobertsonWalker& rw, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Interval range = sample_range(rw.warping());
  Chart ch;
  ch.c = rw.space_form();
  ch.t0 = range.lo + (range.hi - range.lo) * 0.5 * (U(rng) + 1.0);
  FiberVector x = FiberVector::Zero();
  switch (ch.c) {
    case SpaceForm::Euclidean: x << U(rng), U(rng), U(rng), 0; break;
    case SpaceForm::Spherical:
      x << U(rng), U(rng), U(rng), U(rng);
      x = project_to_model(ch.c, x + FiberVector(0.1, 0, 0, 0));
      break;
    case SpaceForm::Hyperbolic: {
      x << 0, U(rng), U(rng), U(rng);
      x[0] = std::sqrt(1.0 + x.tail<3>().squaredNorm());
      break;
    }
  }
  ch.x0 = x;
  const FiberPoint p{ch.c, x};
  int filled = 0;
  const int slots = ch.c == SpaceForm::Euclidean ? 3 : 4;
  for (int k = 0; k < slots && filled < 3; ++k) {
    FiberVector w = fiber_tangent_project(p, FiberVector::Unit(k));
    for (int m = 0; m < filled; ++m) w -= embedding_inner(ch.c, w, ch.E[m]) * ch.E[m];
    const double q = embedding_inner(ch.c, w, w);
    if (q > 1e-6) ch.E[filled++] = w / std::sqrt(q);
  }
  return ch;
}

Eigen::Vector4d random_vec(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  return Eigen::Vector4d(U(rng), U(rng), U(rng), U(rng));
}

}  // namespace

CheckResult check_curvature_lemma(const RobertsonWalker& rw, int samples, std::uint64_t seed,
                                  const Tolerances& tol) {
  Grid g;
  g.nu = samples;
  g.nv = 1;
  CheckResult r = new_check("curvature", g, tol.curvature);
  std::mt19937_64 rng(seed);
  for (int n = 0; n < samples; ++n) {
    const Chart ch = random_chart(rw, rng);
    const Eigen::Vector4d X = random_vec(rng), Y = random_vec(rng), Z = random_vec(rng);
    auto nabla = [&](const Eigen::Vector4d& y, const Eigen::Vector4d& dir,
                     const std::function<AmbientVector(const Eigen::Vector4d&)>& field, double h) {
      return rw.covariant_derivative([&](double s) { return ch.point(y + s * dir); },
                                     [&](double s) { return field(y + s * dir); }, 0.0, h);
    };
    auto R = [&](double h) {
      auto Zf = [&](const Eigen::Vector4d& y) { return ch.push(y, Z); };
      auto nYZ = [&](const Eigen::Vector4d& y) { return nabla(y, Y, Zf, h); };
      auto nXZ = [&](const Eigen::Vector4d& y) { return nabla(y, X, Zf, h); };
      const Eigen::Vector4d y0 = Eigen::Vector4d::Zero();
      return nabla(y0, X, nYZ, h) - nabla(y0, Y, nXZ, h);
    };
    const double h = 2e-3;
    const AmbientVector numeric = (16.0 * R(0.5 * h) - R(h)) * (1.0 / 15.0);
    const AmbientPoint p = ch.point(Eigen::Vector4d::Zero());
    const AmbientVector closed = rw.curvature(p, ch.push(Eigen::Vector4d::Zero(), X),
                                              ch.push(Eigen::Vector4d::Zero(), Y),
                                              ch.push(Eigen::Vector4d::Zero(), Z));
    r.record((numeric - closed).max_abs(), p.t, static_cast<double>(n));
  }
  r.extras["seed"] = seed;
  r.finalize();
  return r;
}

CheckResult check_metric_compatibility(const RobertsonWalker& rw, int samples, std::uint64_t seed,
                                       const Tolerances& tol) {
  Grid g;
  g.nu = samples;
  g.nv = 1;
  CheckResult r = new_check("compatibility", g, tol.compatibility);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int n = 0; n < samples; ++n) {
    const Chart ch = random_chart(rw, rng);
    const Eigen::Vector4d d = random_vec(rng), q = 0.3 * random_vec(rng);
    const Eigen::Vector4d v0 = random_vec(rng), v1 = random_vec(rng);
    const Eigen::Vector4d w0 = random_vec(rng), w1 = random_vec(rng);
    auto y = [&](double s) -> Eigen::Vector4d { return s * d + s * s * q; };
    auto curve = [&](double s) { return ch.point(y(s)); };
    auto V = [&](double s) { return ch.push(y(s), v0 + s * v1 + s * s * w1); };
    auto W = [&](double s) { return ch.push(y(s), w0 - s * w1 + s * s * v1); };
    const double h = 1e-3;
    const double lhs = numdiff::central4(
        [&](double s) { return rw.metric(curve(s), V(s), W(s)); }, 0.0, h);
    const AmbientPoint p = curve(0.0);
    const double rhs = rw.metric(p, rw.covariant_derivative(curve, V, 0.0, h), W(0.0)) +
                       rw.metric(p, V(0.0), rw.covariant_derivative(curve, W, 0.0, h));
    r.record(std::abs(lhs - rhs), p.t, static_cast<double>(n));
  }
  r.finalize();
  return r;
}

CheckResult check_torsion(const RobertsonWalker& rw, int samples, std::uint64_t seed,
                          const Tolerances& tol) {
  Grid g;
  g.nu = samples;
  g.nv = 1;
  CheckResult r = new_check("torsion", g, tol.torsion);
  std::mt19937_64 rng(seed ^ 0x5851f42d4c957f2dULL);
  for (int n = 0; n < samples; ++n) {
    const Chart ch = random_chart(rw, rng);
    const Eigen::Vector4d A = random_vec(rng), B = random_vec(rng);
    const Eigen::Vector4d C = 0.3 * random_vec(rng), D = 0.3 * random_vec(rng);
    auto y = [&](double u, double v) -> Eigen::Vector4d { return u * A + v * B + u * v * C + u * u * D; };
    auto phi_u = [&](double u, double v) { return ch.push(y(u, v), A + v * C + 2.0 * u * D); };
    auto phi_v = [&](double u, double v) { return ch.push(y(u, v), B + u * C); };
    const double h = 1e-3;
    const AmbientVector uv = rw.covariant_derivative(
        [&](double s) { return ch.point(y(s, 0.0)); }, [&](double s) { return phi_v(s, 0.0); }, 0.0, h);
    const AmbientVector vu = rw.covariant_derivative(
        [&](double s) { return ch.point(y(0.0, s)); }, [&](double s) { return phi_u(0.0, s); }, 0.0, h);
    r.record((uv - vu).max_abs(), ch.t0, static_cast<double>(n));
  }
  r.finalize();
  return r;
}

double theta_fit_target(const FamilySpec& spec) {
  if (is_rw0(spec.kind)) return std::abs(spec.a);
  if (is_flat_time(spec.kind)) return std::abs(spec.theta0);
  return 0.0;
}

const std::vector<std::string>& battery_check_names() {
  static const std::vector<std::string> names = {"prn",     "frame",      "theta",
                                                 "codazzi", "ricci",      "closed_form",
                                                 "curvature", "compatibility", "torsion"};
  return names;
}

VerificationReport run_battery(const RobertsonWalker& rw, const Immersion& immersion,
                               const Grid& grid, const BatteryOptions& opts,
                               const std::optional<FamilySpec>& spec) {
  for (const auto& name : opts.checks) {
    const auto& known = battery_check_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw ConfigError("unknown check '" + name + "'");
    }
  }
  auto wanted = [&](const std::string& name) { return opts.checks.empty() || opts.checks.count(name); };
  VerificationReport report;
  report.conventions = {
      "e1 = T/|T|; spacelike: sinh(theta) = <d/dt, e1> >= 0, timelike: e1 future-directed",
      "e3 = eta/|eta|; timelike theta = asinh(<d/dt, e3>) >= 0",
      "e2 oriented like (phi_u, phi_v); e4 fixed by a positive frame determinant",
      "omega = eps2 <nabla_e2 e1, e2>; h^alpha_22 reported as <h(e2, e2), e_alpha>",
      "closed-form comparison uses magnitudes; sign agreement listed per quantity"};

  const FrameField adapted = opts.coordinate_frames ? coordinate_frame_field(rw, immersion, opts.diff)
                                                    : adapted_frame_field(rw, immersion, opts.diff);
  const bool needs_samples = wanted("prn") || wanted("frame") || wanted("theta") ||
                             wanted("codazzi") || wanted("ricci") ||
                             (spec && wanted("closed_form"));
  SampleSet samples;
  FrameField frames = adapted;
  if (needs_samples) {
    samples = sample_grid(rw, immersion, adapted, grid, opts.diff);
    const bool any_ok = std::any_of(samples.points.begin(), samples.points.end(),
                                    [](const PointSample& s) { return s.ok(); });
    SampleSet coord_samples;
    if (!any_ok && !opts.coordinate_frames) {
      frames = coordinate_frame_field(rw, immersion, opts.diff);
      coord_samples = sample_grid(rw, immersion, frames, grid, opts.diff);
      report.conventions.push_back(
          "no adapted frame on the grid: Codazzi and Ricci checks use coordinate frames");
    }
    const SampleSet& generic = any_ok || opts.coordinate_frames ? samples : coord_samples;
    if (wanted("prn")) report.checks.push_back(check_prn(samples, opts.tol));
    if (wanted("frame")) report.checks.push_back(check_frame_equations(rw, samples, opts.tol));
    if (wanted("theta")) {
      std::optional<double> expected;
      if (spec) expected = theta_fit_target(*spec);
      report.checks.push_back(check_theta_law(rw, samples, opts.tol, expected));
    }
    if (wanted("codazzi")) {
      report.checks.push_back(check_codazzi(rw, immersion, frames, generic, opts.tol, opts.diff));
    }
    if (wanted("ricci")) report.checks.push_back(check_ricci_flatness_consistency(generic, opts.tol));
    if (spec && wanted("closed_form")) {
      const double tol = immersion.has_analytic_partials() ? opts.tol.closed_form
                                                           : opts.tol.closed_form_differenced;
      report.checks.push_back(compare_closed_form(*spec, samples, tol));
    }
  }
  if (wanted("curvature")) {
    report.checks.push_back(check_curvature_lemma(rw, opts.oracle_samples, opts.seed, opts.tol));
  }
  if (wanted("compatibility")) {
    report.checks.push_back(check_metric_compatibility(rw, opts.oracle_samples, opts.seed, opts.tol));
  }
  if (wanted("torsion")) {
    report.checks.push_back(check_torsion(rw, opts.oracle_samples, opts.seed, opts.tol));
  }
  return report;
}

}  // namespace rwsurf
