#include "rwsurf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

#include <boost/math/tools/roots.hpp>

#include "rwsurf/errors.hpp"
#include "rwsurf/families.hpp"
#include "rwsurf/mesh.hpp"

namespace rwsurf {

namespace fs = std::filesystem;

RunConfig resolve_config(const CliOptions& opts) {
  if (opts.config.empty()) throw ConfigError("--config is required");
  RunConfig cfg = load_config(opts.config);
  if (opts.out) cfg.output.dir = *opts.out;
  if (opts.grid) std::tie(cfg.nu, cfg.nv) = *opts.grid;
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw ConfigError("--tol must be positive");
    cfg.tolerances = cfg.tolerances.with_global(*opts.tol);
  }
  if (opts.perturb) cfg.perturb = *opts.perturb;
  if (opts.checks) {
    const auto& known = battery_check_names();
    for (const auto& name : *opts.checks) {
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigError("unknown check '" + name + "'");
      }
    }
    cfg.checks = *opts.checks;
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.allow_constant_curvature) cfg.allow_constant_curvature = true;
  return cfg;
}

namespace {

void print_diagnostics(const InadmissibleSpecError& e, std::ostream& err) {
  err << "inadmissible family:\n";
  for (const auto& d : e.diagnostics()) {
    err << "  [" << d.code << "] " << d.message;
    if (d.at_u) err << " (u=" << *d.at_u << ")";
    if (d.at_v) err << " (v=" << *d.at_v << ")";
    err << '\n';
  }
}

std::string output_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output.dir);
  return (fs::path(cfg.output.dir) / name).string();
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

const FamilySpec& require_family(const RunConfig& cfg, const char* command) {
  if (!cfg.family) throw ConfigError(std::string(command) + " needs a 'family' block");
  return *cfg.family;
}

struct Built {
  RobertsonWalker rw;
  Immersion immersion;
};

Built build(const RunConfig& cfg) {
  const FamilySpec& spec = *cfg.family;
  Built b{ambient_for(spec), construct(spec, {cfg.allow_constant_curvature})};
  if (cfg.perturb != 0.0) b.immersion = perturb_along_normal(b.rw, b.immersion, cfg.perturb);
  return b;
}

void print_report(const VerificationReport& report, std::ostream& out) {
  for (const auto& c : report.checks) {
    out << std::left << std::setw(14) << c.name << ' ' << (c.pass ? "PASS" : "FAIL")
        << "  max=" << std::scientific << std::setprecision(3) << c.max_residual
        << "  tol=" << c.tolerance << std::defaultfloat << "  points=" << c.evaluated;
    if (c.skipped_total() > 0) out << "  skipped=" << c.skipped_total();
    if (!c.error.empty()) out << "  error: " << c.error;
    out << '\n';
  }
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InadmissibleSpecError& e) {
    print_diagnostics(e, err);
    return kExitInvalidConfig;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
}

int verify_mesh(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  const LoadedMesh loaded = read_csv(path);
  const RobertsonWalker rw = cfg.ambient_space();
  if (rw.space_form() != loaded.c) {
    throw ConfigError("mesh lives in " + to_string(loaded.c) + " but the config ambient is " +
                      to_string(rw.space_form()));
  }
  const SampleSet samples = sample_mesh(rw, loaded.mesh);
  Tolerances tol = cfg.tolerances;
  tol.prn = tol.mesh_prn;
  tol.theta = tol.mesh_theta;
  VerificationReport report;
  report.conventions = {"mesh mode: sixth-order differences on interior nodes, three-node margin",
                        "h from the coordinate Gauss formula"};
  auto wanted = [&](const char* name) { return cfg.checks.empty() || cfg.checks.count(name); };
  if (wanted("prn")) report.checks.push_back(check_prn(samples, tol));
  if (wanted("theta")) {
    std::optional<double> expected;
    if (cfg.family) expected = theta_fit_target(*cfg.family);
    report.checks.push_back(check_theta_law(rw, samples, tol, expected));
  }
  if (wanted("ricci")) report.checks.push_back(check_ricci_flatness_consistency(samples, tol));
  print_report(report, out);
  nlohmann::json j = report.to_json();
  j["mode"] = "mesh";
  j["mesh"] = path;
  j["config"] = to_json(cfg);
  const std::string report_path = output_path(cfg, cfg.output.report);
  write_json(report_path, j);
  out << "report: " << report_path << '\n';
  return report.all_pass() ? kExitPass : kExitCheckFailure;
}

}  // namespace

int cmd_construct(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(opts);
    require_family(cfg, "construct");
    const Built b = build(cfg);
    const MeshGrid mesh = sample_immersion(b.immersion, cfg.nu, cfg.nv);
    const std::string csv = output_path(cfg, cfg.output.csv);
    write_csv(csv, mesh, b.immersion.c);
    out << "wrote " << mesh.points.size() << " rows to " << csv << '\n';
    if (!cfg.output.obj.empty()) {
      const std::string obj = output_path(cfg, cfg.output.obj);
      write_obj(obj, mesh, b.immersion.c);
      out << "wrote " << obj << '\n';
    }
    return static_cast<int>(kExitPass);
  });
}

int cmd_verify(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(opts);
    if (opts.mesh) return verify_mesh(cfg, *opts.mesh, out);

    BatteryOptions bo;
    bo.tol = cfg.tolerances;
    bo.checks = cfg.checks;
    bo.seed = cfg.seed;
    VerificationReport report;
    std::string mode = "ambient";
    if (cfg.family) {
      const Built b = build(cfg);
      const Grid grid = make_grid(cfg.family->rect, cfg.nu, cfg.nv);
      mode = b.immersion.has_analytic_partials() ? "analytic" : "differenced";
      report = run_battery(b.rw, b.immersion, grid, bo, cfg.family);
    } else {
      const RobertsonWalker rw = cfg.ambient_space();
      auto wanted = [&](const char* name) { return cfg.checks.empty() || cfg.checks.count(name); };
      if (wanted("curvature")) report.checks.push_back(check_curvature_lemma(rw, 100, cfg.seed, bo.tol));
      if (wanted("compatibility")) {
        report.checks.push_back(check_metric_compatibility(rw, 100, cfg.seed, bo.tol));
      }
      if (wanted("torsion")) report.checks.push_back(check_torsion(rw, 100, cfg.seed, bo.tol));
    }
    print_report(report, out);
    nlohmann::json j = report.to_json();
    j["mode"] = mode;
    j["config"] = to_json(cfg);
    const std::string report_path = output_path(cfg, cfg.output.report);
    write_json(report_path, j);
    out << "report: " << report_path << '\n';
    out << (report.all_pass() ? "all checks passed" : "some checks failed") << '\n';
    return static_cast<int>(report.all_pass() ? kExitPass : kExitCheckFailure);
  });
}

nlohmann::json AmbientScan::to_json() const {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : vanishing_runs) runs.push_back({r.lo, r.hi});
  return {{"range", {range.lo, range.hi}},
          {"samples", samples},
          {"vanishing_runs", runs},
          {"roots", roots},
          {"sign_changes", sign_changes},
          {"vanishes_everywhere", vanishes_everywhere},
          {"vanishes_on_open_set", vanishes_on_open_set},
          {"verdict", verdict}};
}

AmbientScan scan_ambient(const RobertsonWalker& rw, int samples, double tol) {
  AmbientScan scan;
  const Interval dom = rw.warping().domain();
  scan.range = dom;
  scan.samples = samples;
  auto g = [&](double t) { return rw.scaled_curvature_defect(t); };
  auto node = [&](int k) { return dom.lo + dom.length() * (k + 0.5) / samples; };
  std::vector<double> ts(samples), gs(samples);
  for (int k = 0; k < samples; ++k) {
    ts[k] = node(k);
    gs[k] = g(ts[k]);
  }
  auto zero = [&](int k) { return std::abs(gs[k]) <= tol; };

  int zeros = 0;
  for (int k = 0; k < samples;) {
    if (!zero(k)) {
      ++k;
      continue;
    }
    int end = k;
    while (end + 1 < samples && zero(end + 1)) ++end;
    const int len = end - k + 1;
    zeros += len;
    if (len >= 3) {
      scan.vanishing_runs.push_back({ts[k], ts[end]});
    } else {
      scan.roots.push_back(ts[k + (len - 1) / 2]);
      if (k > 0 && end + 1 < samples && (gs[k - 1] > 0) != (gs[end + 1] > 0)) ++scan.sign_changes;
    }
    k = end + 1;
  }
  for (int k = 0; k + 1 < samples; ++k) {
    if (zero(k) || zero(k + 1) || (gs[k] > 0) == (gs[k + 1] > 0)) continue;
    ++scan.sign_changes;
    boost::math::tools::eps_tolerance<double> stop(50);
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::bisect(g, ts[k], ts[k + 1], stop, iters);
    scan.roots.push_back(0.5 * (lo + hi));
  }
  std::sort(scan.roots.begin(), scan.roots.end());
  scan.vanishes_everywhere = zeros == samples;
  scan.vanishes_on_open_set = !scan.vanishing_runs.empty();
  if (scan.vanishes_everywhere) {
    scan.verdict = "constant curvature everywhere";
  } else if (scan.vanishes_on_open_set) {
    scan.verdict = "constant curvature on an open subset: ambient inadmissible";
  } else {
    scan.verdict = "defect nonzero: ambient admissible";
  }
  return scan;
}

int cmd_ambient_check(const CliOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = resolve_config(opts);
    const RobertsonWalker rw = cfg.ambient_space();
    const AmbientScan scan = scan_ambient(rw);
    out << "warping " << to_string(rw.warping().family()) << " on (" << scan.range.lo << ", "
        << scan.range.hi << "), fiber " << to_string(rw.space_form()) << '\n';
    out << scan.verdict << '\n';
    for (const auto& r : scan.vanishing_runs) out << "  defect vanishes on [" << r.lo << ", " << r.hi << "]\n";
    for (double t : scan.roots) out << "  zero at t=" << std::setprecision(12) << t << '\n';
    out << "  sign changes: " << scan.sign_changes << '\n';
    nlohmann::json j = scan.to_json();
    j["config"] = to_json(cfg);
    const std::string report_path = output_path(cfg, cfg.output.report);
    write_json(report_path, j);
    out << "report: " << report_path << '\n';
    return static_cast<int>(scan.vanishes_on_open_set ? kExitCheckFailure : kExitPass);
  });
}

}  // namespace rwsurf
