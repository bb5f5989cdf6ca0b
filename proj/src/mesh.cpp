#include "rwsurf/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rwsurf/errors.hpp"

namespace rwsurf {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> nodes(const Interval& range, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    out[k] = n == 1 ? range.lo : range.lo + (range.hi - range.lo) * k / (n - 1.0);
  }
  out.back() = range.hi;
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace

MeshGrid sample_immersion(const Immersion& immersion, int nu, int nv) {
  MeshGrid m;
  m.us = nodes(immersion.domain.u, nu);
  m.vs = nodes(immersion.domain.v, nv);
  m.points.reserve(static_cast<std::size_t>(nu) * nv);
  for (double u : m.us) {
    for (double v : m.vs) m.points.push_back(immersion.point(u, v));
  }
  return m;
}

std::string csv_text(const MeshGrid& mesh, SpaceForm c) {
  std::ostringstream out;
  out << "u,v,t,x1,x2,x3,x4\n";
  for (std::size_t i = 0; i < mesh.us.size(); ++i) {
    for (std::size_t j = 0; j < mesh.vs.size(); ++j) {
      const AmbientPoint& p = mesh.at(static_cast<int>(i), static_cast<int>(j));
      const auto& x = p.fiber.x;
      out << fmt(mesh.us[i]) << ',' << fmt(mesh.vs[j]) << ',' << fmt(p.t) << ',' << fmt(x[0]) << ','
          << fmt(x[1]) << ',' << fmt(x[2]) << ',';
      if (c != SpaceForm::Euclidean) out << fmt(x[3]);
      out << '\n';
    }
  }
  return out.str();
}

void write_csv(const std::string& path, const MeshGrid& mesh, SpaceForm c) {
  write_file(path, csv_text(mesh, c));
}

LoadedMesh read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != "u,v,t,x1,x2,x3,x4") {
    throw ConfigError(path + ": expected header 'u,v,t,x1,x2,x3,x4'");
  }
  struct Row {
    double u, v, t;
    FiberVector x;
    bool has_x4;
  };
  std::vector<Row> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 7 columns");
    double vals[7] = {0, 0, 0, 0, 0, 0, 0};
    for (int k = 0; k < 7; ++k) {
      if (k == 6 && cells[k].empty()) continue;
      try {
        std::size_t used = 0;
        vals[k] = std::stod(cells[k], &used);
        if (used != cells[k].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) + ": bad number '" + cells[k] + "'");
      }
    }
    rows.push_back({vals[0], vals[1], vals[2], FiberVector(vals[3], vals[4], vals[5], vals[6]),
                    !cells[6].empty()});
  }
  if (rows.empty()) throw ConfigError(path + ": no data rows");

  LoadedMesh out;
  for (const Row& r : rows) {
    if (r.u != rows.front().u) break;
    out.mesh.vs.push_back(r.v);
  }
  const std::size_t nv = out.mesh.vs.size();
  if (rows.size() % nv != 0) throw ConfigError(path + ": rows do not form a u-major grid");
  for (std::size_t i = 0; i < rows.size(); i += nv) out.mesh.us.push_back(rows[i].u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].u != out.mesh.us[k / nv] || rows[k].v != out.mesh.vs[k % nv]) {
      throw ConfigError(path + ": rows do not form a u-major grid");
    }
  }

  const bool x4 = rows.front().has_x4;
  for (const Row& r : rows) {
    if (r.has_x4 != x4) throw ConfigError(path + ": x4 must be empty in every row or in none");
  }
  if (!x4) {
    out.c = SpaceForm::Euclidean;
  } else {
    const FiberVector& x = rows.front().x;
    const double sph = std::abs(x.squaredNorm() - 1.0);
    const double hyp = std::abs(-x[0] * x[0] + x.tail<3>().squaredNorm() + 1.0);
    out.c = sph <= hyp ? SpaceForm::Spherical : SpaceForm::Hyperbolic;
  }
  for (const Row& r : rows) {
    if (model_residual(out.c, r.x) > 1e-8) {
      throw ConfigError(path + ": point off the " + to_string(out.c) + " model");
    }
    out.mesh.points.push_back(AmbientPoint{r.t, FiberPoint{out.c, r.x}});
  }
  return out;
}

void write_obj(const std::string& path, const MeshGrid& mesh, SpaceForm c) {
  std::ostringstream out;
  if (c == SpaceForm::Euclidean) {
    out << "# fiber coordinates (x1, x2, x3); t in the trailing comment\n";
  } else {
    out << "# stereographic projection from (-1,0,0,0): (x2, x3, x4) / (1 + x1); t in the trailing comment\n";
  }
  for (const AmbientPoint& p : mesh.points) {
    const auto& x = p.fiber.x;
    Eigen::Vector3d y(x[0], x[1], x[2]);
    if (c != SpaceForm::Euclidean) y = Eigen::Vector3d(x[1], x[2], x[3]) / (1.0 + x[0]);
    out << "v " << fmt(y[0]) << ' ' << fmt(y[1]) << ' ' << fmt(y[2]) << " # t=" << fmt(p.t) << '\n';
  }
  const std::size_t nu = mesh.us.size(), nv = mesh.vs.size();
  auto id = [nv](std::size_t i, std::size_t j) { return i * nv + j + 1; };
  for (std::size_t i = 0; i + 1 < nu; ++i) {
    for (std::size_t j = 0; j + 1 < nv; ++j) {
      out << "f " << id(i, j) << ' ' << id(i + 1, j) << ' ' << id(i + 1, j + 1) << '\n';
      out << "f " << id(i, j) << ' ' << id(i + 1, j + 1) << ' ' << id(i, j + 1) << '\n';
    }
  }
  write_file(path, out.str());
}

}  // namespace rwsurf
