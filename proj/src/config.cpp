#include "rwsurf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rwsurf/errors.hpp"

namespace rwsurf {

namespace {

using nlohmann::json;

// Object reader that rejects unknown keys so typos surface as errors.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(where_ + ": " + what); }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    if (!has(key)) fail("missing key '" + key + "'");
    return j_.at(key);
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail("'" + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("'" + key + "' must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) fail("'" + key + "' must be an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) fail("'" + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail("'" + key + "' must be a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail("'" + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Interval interval(const std::string& key) {
    const auto v = numbers(key);
    if (v.size() != 2) fail("'" + key + "' must be [lo, hi]");
    if (!(v[0] < v[1])) fail("'" + key + "' must satisfy lo < hi");
    return {v[0], v[1]};
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail("unknown key '" + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

const std::map<std::string, WarpingFunction::Family>& warping_names() {
  static const std::map<std::string, WarpingFunction::Family> names = {
      {"constant", WarpingFunction::Family::Constant},
      {"exponential", WarpingFunction::Family::Exponential},
      {"cosh", WarpingFunction::Family::Cosh},
      {"polynomial", WarpingFunction::Family::Polynomial},
      {"power_shifted", WarpingFunction::Family::PowerShifted}};
  return names;
}

std::string warping_name(WarpingFunction::Family f) {
  for (const auto& [name, fam] : warping_names()) {
    if (fam == f) return name;
  }
  return "?";
}

json interval_json(const Interval& i) { return json::array({i.lo, i.hi}); }

json vector_json(const FiberVector& x) { return json::array({x[0], x[1], x[2], x[3]}); }

FiberVector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() < 3 || j.size() > 4) {
    throw ConfigError(where + ": expected an array of 3 or 4 numbers");
  }
  FiberVector x = FiberVector::Zero();
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(where + ": expected numbers");
    x[static_cast<int>(k)] = j[k].get<double>();
  }
  return x;
}

CurveSpec curve_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  CurveSpec c;
  const std::string type = r.string("type", "circle");
  if (type == "circle") {
    c.type = CurveSpec::Type::Circle;
    c.radius = r.number("radius", 1.0);
  } else if (type == "sampled") {
    c.type = CurveSpec::Type::Sampled;
    c.s0 = r.number("s0", 0.0);
    c.ds = r.number("ds", 1.0);
    const json& pts = r.raw("points");
    if (!pts.is_array()) r.fail("'points' must be an array");
    for (std::size_t k = 0; k < pts.size(); ++k) {
      c.samples.push_back(vector_from_json(pts[k], r.path("points[" + std::to_string(k) + "]")));
    }
  } else {
    r.fail("unknown curve type '" + type + "'");
  }
  r.finish();
  return c;
}

json curve_json(const CurveSpec& c) {
  json j;
  if (c.type == CurveSpec::Type::Circle) {
    j["type"] = "circle";
    j["radius"] = c.radius;
  } else {
    j["type"] = "sampled";
    j["s0"] = c.s0;
    j["ds"] = c.ds;
    j["points"] = json::array();
    for (const auto& x : c.samples) j["points"].push_back(vector_json(x));
  }
  return j;
}

FamilySpec family_from_json(const json& j, const std::optional<AmbientConfig>& ambient) {
  Reader r(j, "family");
  FamilySpec s;
  const std::string kind = r.string("kind");
  try {
    s.kind = family_kind_from_string(kind);
  } catch (const std::exception&) {
    r.fail("unknown family kind '" + kind + "'");
  }
  if (ambient) {
    s.warping = ambient->warping;
    s.c = ambient->c;
  }
  s.a = r.number("a", 0.0);
  const bool has_theta = r.has("theta0"), has_cosh = r.has("cosh_theta0");
  if (has_theta && has_cosh) r.fail("give either 'theta0' or 'cosh_theta0', not both");
  if (has_theta) s.theta0 = r.number("theta0");
  if (has_cosh) {
    const double ch = r.number("cosh_theta0");
    if (ch < 1.0) r.fail("'cosh_theta0' must be >= 1");
    s.theta0 = std::acosh(ch);
  }
  auto coefficient = [&](const std::string& key, double fallback) {
    return r.has(key) ? coefficient_from_json(r.raw(key), r.path(key))
                      : CoefficientFunction::constant(fallback);
  };
  s.a1 = coefficient("a1", 0.0);
  s.a2 = coefficient("a2", 0.0);
  s.a3 = coefficient("a3", 0.0);
  s.phi1 = coefficient("phi1", 0.0);
  s.phi2_0 = r.number("phi2_0", 0.0);
  s.phi3_0 = r.number("phi3_0", 0.0);
  s.u0 = r.number("u0", 0.0);
  s.v0 = r.number("v0", 0.0);
  s.rect.u = r.interval("u_range");
  s.rect.v = r.interval("v_range");
  if (r.has("curve")) s.curve = curve_from_json(r.raw("curve"), r.path("curve"));
  if (r.has("initial")) {
    const json& init = r.raw("initial");
    if (!init.is_array()) r.fail("'initial' must be an array of vectors");
    for (std::size_t k = 0; k < init.size(); ++k) {
      s.initial.push_back(vector_from_json(init[k], r.path("initial[" + std::to_string(k) + "]")));
    }
  }
  r.finish();
  return s;
}

json family_json(const FamilySpec& s) {
  json j;
  j["kind"] = to_string(s.kind);
  j["a"] = s.a;
  j["theta0"] = s.theta0;
  j["a1"] = to_json(s.a1);
  j["a2"] = to_json(s.a2);
  j["a3"] = to_json(s.a3);
  j["phi1"] = to_json(s.phi1);
  j["phi2_0"] = s.phi2_0;
  j["phi3_0"] = s.phi3_0;
  j["u0"] = s.u0;
  j["v0"] = s.v0;
  j["u_range"] = interval_json(s.rect.u);
  j["v_range"] = interval_json(s.rect.v);
  j["curve"] = curve_json(s.curve);
  if (!s.initial.empty()) {
    j["initial"] = json::array();
    for (const auto& x : s.initial) j["initial"].push_back(vector_json(x));
  }
  return j;
}

Tolerances tolerances_from_json(const json& j) {
  Reader r(j, "tolerances");
  Tolerances t;
  if (r.has("global")) t = t.with_global(r.number("global"));
  const std::pair<const char*, double Tolerances::*> fields[] = {
      {"prn", &Tolerances::prn},
      {"prn_floor", &Tolerances::prn_floor},
      {"frame", &Tolerances::frame},
      {"theta", &Tolerances::theta},
      {"theta0_fit", &Tolerances::theta0_fit},
      {"codazzi", &Tolerances::codazzi},
      {"codazzi_step", &Tolerances::codazzi_step},
      {"closed_form", &Tolerances::closed_form},
      {"closed_form_differenced", &Tolerances::closed_form_differenced},
      {"ricci", &Tolerances::ricci},
      {"curvature", &Tolerances::curvature},
      {"compatibility", &Tolerances::compatibility},
      {"torsion", &Tolerances::torsion},
      {"nullity_rel", &Tolerances::nullity_rel},
      {"nullity_abs", &Tolerances::nullity_abs},
      {"mesh_prn", &Tolerances::mesh_prn},
      {"mesh_theta", &Tolerances::mesh_theta}};
  for (const auto& [key, member] : fields) {
    if (r.has(key)) {
      const double x = r.number(key);
      if (!(x > 0.0)) r.fail(std::string("'") + key + "' must be positive");
      t.*member = x;
    }
  }
  r.finish();
  return t;
}

json tolerances_json(const Tolerances& t) {
  return {{"prn", t.prn},
          {"prn_floor", t.prn_floor},
          {"frame", t.frame},
          {"theta", t.theta},
          {"theta0_fit", t.theta0_fit},
          {"codazzi", t.codazzi},
          {"codazzi_step", t.codazzi_step},
          {"closed_form", t.closed_form},
          {"closed_form_differenced", t.closed_form_differenced},
          {"ricci", t.ricci},
          {"curvature", t.curvature},
          {"compatibility", t.compatibility},
          {"torsion", t.torsion},
          {"nullity_rel", t.nullity_rel},
          {"nullity_abs", t.nullity_abs},
          {"mesh_prn", t.mesh_prn},
          {"mesh_theta", t.mesh_theta}};
}

void check_grid(int nu, int nv) {
  if (nu < 4 || nv < 4) {
    throw ConfigError("grid must be at least 4x4, got " + std::to_string(nu) + "x" +
                      std::to_string(nv));
  }
}

}  // namespace

WarpingFunction warping_from_json(const json& j, const std::string& where) {
  Reader r(j, where);
  const std::string family = r.string("family");
  const auto it = warping_names().find(family);
  if (it == warping_names().end()) r.fail("unknown warping family '" + family + "'");
  const Interval domain = r.interval("interval");
  std::optional<WarpingFunction> f;
  try {
    switch (it->second) {
      case WarpingFunction::Family::Constant:
        f = WarpingFunction::constant(r.number("value", 1.0), domain);
        break;
      case WarpingFunction::Family::Exponential:
        f = WarpingFunction::exponential(r.number("amplitude", 1.0), r.number("rate", 1.0), domain);
        break;
      case WarpingFunction::Family::Cosh:
        f = WarpingFunction::cosh(r.number("amplitude", 1.0), r.number("rate", 1.0), domain);
        break;
      case WarpingFunction::Family::Polynomial:
        f = WarpingFunction::polynomial(r.numbers("coeffs"), domain);
        break;
      case WarpingFunction::Family::PowerShifted:
        f = WarpingFunction::power_shifted(r.number("amplitude", 1.0), r.number("shift", 0.0),
                                           r.number("power"), domain);
        break;
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    r.fail(e.what());
  }
  r.finish();
  return *f;
}

nlohmann::json to_json(const WarpingFunction& f) {
  json j;
  j["family"] = warping_name(f.family());
  const auto& p = f.params();
  switch (f.family()) {
    case WarpingFunction::Family::Constant: j["value"] = p.at(0); break;
    case WarpingFunction::Family::Exponential:
    case WarpingFunction::Family::Cosh:
      j["amplitude"] = p.at(0);
      j["rate"] = p.at(1);
      break;
    case WarpingFunction::Family::Polynomial: j["coeffs"] = p; break;
    case WarpingFunction::Family::PowerShifted:
      j["amplitude"] = p.at(0);
      j["shift"] = p.at(1);
      j["power"] = p.at(2);
      break;
  }
  j["interval"] = interval_json(f.domain());
  return j;
}

CoefficientFunction coefficient_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return CoefficientFunction::constant(j.get<double>());
  Reader r(j, where);
  const std::string type = r.string("type");
  std::optional<CoefficientFunction> out;
  if (type == "constant") {
    out = CoefficientFunction::constant(r.number("value"));
  } else if (type == "polynomial") {
    out = CoefficientFunction::polynomial(r.numbers("coeffs"));
  } else if (type == "sinusoid") {
    out = CoefficientFunction::sinusoid(r.number("amplitude"), r.number("frequency"),
                                        r.number("phase", 0.0), r.number("offset", 0.0));
  } else if (type == "sampled") {
    out = CoefficientFunction::sampled(r.numbers("knots"), r.numbers("values"));
  } else {
    r.fail("unknown coefficient type '" + type + "'");
  }
  r.finish();
  return *out;
}

nlohmann::json to_json(const CoefficientFunction& f) {
  const auto& p = f.params();
  switch (f.family()) {
    case CoefficientFunction::Family::Constant: return p.at(0);
    case CoefficientFunction::Family::Polynomial: return {{"type", "polynomial"}, {"coeffs", p}};
    case CoefficientFunction::Family::Sinusoid:
      return {{"type", "sinusoid"},
              {"amplitude", p.at(0)},
              {"frequency", p.at(1)},
              {"phase", p.at(2)},
              {"offset", p.at(3)}};
    case CoefficientFunction::Family::Sampled:
      return {{"type", "sampled"}, {"knots", f.knots()}, {"values", p}};
  }
  return nullptr;
}

std::pair<int, int> parse_grid(const std::string& text) {
  int nu = 0, nv = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> nu >> x >> nv) || (x != 'x' && x != 'X') || !in.eof()) {
    throw ConfigError("grid must look like NxM, got '" + text + "'");
  }
  check_grid(nu, nv);
  return {nu, nv};
}

RunConfig config_from_json(const json& j) {
  Reader r(j, "config");
  RunConfig cfg;
  if (r.has("ambient")) {
    Reader a(r.raw("ambient"), "ambient");
    AmbientConfig amb;
    if (a.has("warping")) amb.warping = warping_from_json(a.raw("warping"), "ambient.warping");
    const json& c = a.raw("c");
    if (!c.is_number_integer()) a.fail("'c' must be -1, 0 or 1");
    amb.c = space_form_from_int(c.get<int>());
    a.finish();
    cfg.ambient = amb;
  }
  if (r.has("family")) cfg.family = family_from_json(r.raw("family"), cfg.ambient);
  if (!cfg.ambient && !cfg.family) r.fail("needs an 'ambient' or a 'family' block");
  if (r.has("grid")) {
    Reader g(r.raw("grid"), "grid");
    if (g.has("size")) {
      std::tie(cfg.nu, cfg.nv) = parse_grid(g.string("size"));
    } else {
      cfg.nu = g.integer("nu", cfg.nu);
      cfg.nv = g.integer("nv", cfg.nv);
    }
    g.finish();
    check_grid(cfg.nu, cfg.nv);
  }
  if (r.has("tolerances")) cfg.tolerances = tolerances_from_json(r.raw("tolerances"));
  if (r.has("output")) {
    Reader o(r.raw("output"), "output");
    cfg.output.dir = o.string("dir", cfg.output.dir);
    cfg.output.csv = o.string("csv", cfg.output.csv);
    cfg.output.obj = o.string("obj", cfg.output.obj);
    cfg.output.report = o.string("report", cfg.output.report);
    o.finish();
  }
  if (r.has("checks")) {
    const json& c = r.raw("checks");
    if (!c.is_array()) r.fail("'checks' must be an array of names");
    const auto& known = battery_check_names();
    for (const auto& name : c) {
      if (!name.is_string()) r.fail("'checks' must be an array of names");
      const std::string s = name.get<std::string>();
      if (std::find(known.begin(), known.end(), s) == known.end()) r.fail("unknown check '" + s + "'");
      cfg.checks.insert(s);
    }
  }
  if (r.has("seed")) {
    const json& s = r.raw("seed");
    if (!s.is_number_unsigned()) r.fail("'seed' must be a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  }
  cfg.perturb = r.number("perturb", 0.0);
  cfg.allow_constant_curvature = r.boolean("allow_constant_curvature", false);
  r.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json to_json(const RunConfig& cfg) {
  json j;
  if (cfg.ambient) {
    json a;
    if (cfg.ambient->warping) a["warping"] = to_json(*cfg.ambient->warping);
    a["c"] = static_cast<int>(curvature(cfg.ambient->c));
    j["ambient"] = a;
  }
  if (cfg.family) j["family"] = family_json(*cfg.family);
  j["grid"] = {{"nu", cfg.nu}, {"nv", cfg.nv}};
  j["tolerances"] = tolerances_json(cfg.tolerances);
  j["output"] = {{"dir", cfg.output.dir},
                 {"csv", cfg.output.csv},
                 {"obj", cfg.output.obj},
                 {"report", cfg.output.report}};
  j["checks"] = cfg.checks;
  j["seed"] = cfg.seed;
  j["perturb"] = cfg.perturb;
  j["allow_constant_curvature"] = cfg.allow_constant_curvature;
  return j;
}

RobertsonWalker RunConfig::ambient_space() const {
  if (family) return ambient_for(*family);
  if (!ambient || !ambient->warping) throw ConfigError("ambient block needs a 'warping' entry");
  return RobertsonWalker(*ambient->warping, ambient->c);
}

}  // namespace rwsurf
