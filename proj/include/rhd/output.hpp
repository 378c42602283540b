#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// One row per solution point: x,rho,v1,p,alpha (alpha is per element).
inline void write_csv_1d(const SolutionField<1>& field, const BasisTables& t, const Eos& eos,
                         const std::vector<double>& alpha, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot open " + path);
  out << "x,rho,v1,p,alpha\n";
  for (int e = 0; e < field.mesh.num_elements(); ++e)
    for (int k = 0; k < field.nodes_per_element(); ++k) {
      const auto w = cons_to_prim(field.at(e, k), eos);
      const double a = e < static_cast<int>(alpha.size()) ? alpha[e] : 0.0;
      out << format_g17(field.position(e, k, t)[0]) << ',' << format_g17(w.rho) << ',' << format_g17(w.v[0]) << ','
          << format_g17(w.p) << ',' << format_g17(a) << '\n';
    }
  if (!out) throw OutputError("write failed for " + path);
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    throw OutputError("missing column " + name);
  }
};

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw OutputError("cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw OutputError("empty file " + path);
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != t.header.size()) throw OutputError("ragged row in " + path);
    t.rows.push_back(std::move(row));
  }
  return t;
}

/// Legacy VTK structured grid through the solution points, point data rho, p, v1, v2, alpha.
inline void write_vtk_2d(const SolutionField<2>& field, const BasisTables& t, const Eos& eos,
                         const std::vector<double>& alpha, double time, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot open " + path);
  const int n = t.size();
  const int nx = field.mesh.cells[0] * n, ny = field.mesh.cells[1] * n;
  auto locate = [&](int ix, int iy, int& e, int& k) {
    e = field.mesh.index({ix / n, iy / n});
    k = (ix % n) + n * (iy % n);
  };
  out << "# vtk DataFile Version 3.0\n";
  out << "solution t=" << format_g17(time) << "\n";
  out << "ASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << nx << ' ' << ny << " 1\n";
  out << "POINTS " << nx * ny << " double\n";
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int e, k;
      locate(ix, iy, e, k);
      const auto x = field.position(e, k, t);
      out << format_g17(x[0]) << ' ' << format_g17(x[1]) << " 0\n";
    }
  std::vector<Primitive<2>> w(static_cast<std::size_t>(nx) * ny);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      int e, k;
      locate(ix, iy, e, k);
      w[ix + static_cast<std::size_t>(nx) * iy] = cons_to_prim(field.at(e, k), eos);
    }
  out << "POINT_DATA " << nx * ny << "\n";
  auto scalar = [&](const char* name, auto getter) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix) out << format_g17(getter(ix, iy)) << '\n';
  };
  auto at = [&](int ix, int iy) -> const Primitive<2>& { return w[ix + static_cast<std::size_t>(nx) * iy]; };
  scalar("rho", [&](int ix, int iy) { return at(ix, iy).rho; });
  scalar("p", [&](int ix, int iy) { return at(ix, iy).p; });
  scalar("v1", [&](int ix, int iy) { return at(ix, iy).v[0]; });
  scalar("v2", [&](int ix, int iy) { return at(ix, iy).v[1]; });
  scalar("alpha", [&](int ix, int iy) {
    const int e = field.mesh.index({ix / n, iy / n});
    return e < static_cast<int>(alpha.size()) ? alpha[e] : 0.0;
  });
  if (!out) throw OutputError("write failed for " + path);
}

enum class CutKind { diagonal, x_axis, y_axis };

/// Nodal values along a cut of a 2D field. diagonal: nodes with equal x and y index (square meshes);
/// x_axis / y_axis: the row / column of nodes nearest to `offset`.
inline void write_line_cut(const SolutionField<2>& field, const BasisTables& t, const Eos& eos, CutKind kind,
                           double offset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot open " + path);
  const int n = t.size();
  const auto& mesh = field.mesh;
  out << "s,x,y,rho,v1,v2,p\n";
  auto emit = [&](int ix, int iy) {
    const int e = mesh.index({ix / n, iy / n});
    const int k = (ix % n) + n * (iy % n);
    const auto x = field.position(e, k, t);
    const auto w = cons_to_prim(field.at(e, k), eos);
    const double s = (kind == CutKind::diagonal) ? std::hypot(x[0] - mesh.lower[0], x[1] - mesh.lower[1])
                     : (kind == CutKind::x_axis) ? x[0] : x[1];
    out << format_g17(s) << ',' << format_g17(x[0]) << ',' << format_g17(x[1]) << ',' << format_g17(w.rho) << ','
        << format_g17(w.v[0]) << ',' << format_g17(w.v[1]) << ',' << format_g17(w.p) << '\n';
  };
  auto nearest = [&](int d) {
    int best = 0;
    double dist = 1e300;
    for (int c = 0; c < mesh.cells[d]; ++c)
      for (int i = 0; i < n; ++i) {
        const double xc = mesh.lower[d] + (c + t.nodes[i]) * mesh.step(d);
        if (std::abs(xc - offset) < dist) {
          dist = std::abs(xc - offset);
          best = c * n + i;
        }
      }
    return best;
  };
  if (kind == CutKind::diagonal) {
    if (mesh.cells[0] != mesh.cells[1]) throw OutputError("diagonal cut needs a square mesh");
    for (int i = 0; i < mesh.cells[0] * n; ++i) emit(i, i);
  } else if (kind == CutKind::x_axis) {
    const int iy = nearest(1);
    for (int ix = 0; ix < mesh.cells[0] * n; ++ix) emit(ix, iy);
  } else {
    const int ix = nearest(0);
    for (int iy = 0; iy < mesh.cells[1] * n; ++iy) emit(ix, iy);
  }
  if (!out) throw OutputError("write failed for " + path);
}

}  // namespace rhd
