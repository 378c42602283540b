#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/errors.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"
#include "rhd/problems.hpp"
#include "rhd/solver.hpp"

namespace rhd {

enum class NormVariable { rho, D, v1, v2, p };

inline NormVariable parse_norm_variable(const std::string& s) {
  if (s == "rho") return NormVariable::rho;
  if (s == "D") return NormVariable::D;
  if (s == "v1") return NormVariable::v1;
  if (s == "v2") return NormVariable::v2;
  if (s == "p") return NormVariable::p;
  throw ConfigError("unknown norm variable '" + s + "'");
}

template <int Dim>
double select_variable(const Primitive<Dim>& w, const Eos& eos, NormVariable var) {
  switch (var) {
    case NormVariable::rho: return w.rho;
    case NormVariable::D: return prim_to_cons(w, eos)[0];
    case NormVariable::v1: return w.v[0];
    case NormVariable::v2: return w.v[Dim - 1];
    case NormVariable::p: return w.p;
  }
  return 0.0;
}

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Quadrature-weighted norms over all solution points, normalized by the domain measure:
/// L1 = sum W |e| |K| / |Omega|, L2 = sqrt(sum W e^2 |K| / |Omega|).
template <int Dim>
ErrorNorms error_norms(const SolutionField<Dim>& field, const BasisTables& t, const Eos& eos,
                       const std::type_identity_t<std::function<Primitive<Dim>(const Point<Dim>&)>>& exact,
                       NormVariable var = NormVariable::rho) {
  ErrorNorms n;
  const double vol = field.mesh.element_measure() / field.mesh.measure();
  double sq = 0.0;
  for (int e = 0; e < field.mesh.num_elements(); ++e)
    for (int k = 0; k < field.nodes_per_element(); ++k) {
      const double num = select_variable(cons_to_prim(field.at(e, k), eos), eos, var);
      const double ref = select_variable(exact(field.position(e, k, t)), eos, var);
      const double err = std::abs(num - ref);
      const double w = field.layout.weight(t, k) * vol;
      n.l1 += w * err;
      sq += w * err * err;
      n.linf = std::max(n.linf, err);
    }
  n.l2 = std::sqrt(sq);
  return n;
}

/// Value of the nodal polynomial at an arbitrary point of the domain.
template <int Dim>
State<Dim> evaluate_field(const SolutionField<Dim>& field, const BasisTables& t, const std::type_identity_t<Point<Dim>>& x) {
  const auto& mesh = field.mesh;
  std::array<int, Dim> c{};
  std::array<std::vector<double>, Dim> l;
  for (int d = 0; d < Dim; ++d) {
    const double s = (x[d] - mesh.lower[d]) / mesh.step(d);
    c[d] = std::clamp(static_cast<int>(std::floor(s)), 0, mesh.cells[d] - 1);
    l[d] = lagrange_values(t.nodes, s - c[d]);
  }
  const int e = mesh.index(c);
  State<Dim> out{};
  for (int k = 0; k < field.nodes_per_element(); ++k) {
    double w = l[0][k % field.layout.n];
    if constexpr (Dim == 2) w *= l[1][k / field.layout.n];
    axpy(out, w, field.at(e, k));
  }
  return out;
}

struct ConvergenceRow {
  int cells = 0;
  ErrorNorms err;
  double order_l1 = 0.0, order_l2 = 0.0, order_linf = 0.0;  ///< relative to the previous row
  long steps = 0;
  double wall_seconds = 0.0;
};

template <int Dim>
SolutionField<Dim> solve_field(const ProblemSpec<Dim>& spec, RunConfig cfg, int cells, RunReport* report = nullptr) {
  cfg.cells.assign(Dim, cells);
  Solver<Dim> solver(spec, cfg);
  const RunReport r = solver.run();
  if (report) *report = r;
  return solver.field();
}

/// Errors and observed orders over a list of grids (n, or n x n in 2D). Without an exact solution the
/// reference is a run on twice the finest grid.
template <int Dim>
std::vector<ConvergenceRow> convergence_study(const ProblemSpec<Dim>& spec, const RunConfig& cfg,
                                              const std::vector<int>& grids, NormVariable var = NormVariable::rho) {
  const Eos eos = spec.eos();
  const BasisTables t = build_basis(cfg.degree);
  const double t_end = cfg.t_final ? *cfg.t_final : spec.t_final;
  std::function<Primitive<Dim>(const Point<Dim>&)> exact;
  SolutionField<Dim> reference;
  if (spec.has_exact()) {
    exact = [&](const Point<Dim>& x) { return spec.exact(x, t_end); };
  } else {
    const int fine = 2 * *std::max_element(grids.begin(), grids.end());
    reference = solve_field(spec, cfg, fine);
    exact = [&](const Point<Dim>& x) { return cons_to_prim(evaluate_field(reference, t, x), eos); };
  }
  std::vector<ConvergenceRow> rows;
  for (int n : grids) {
    RunReport rep;
    const SolutionField<Dim> f = solve_field(spec, cfg, n, &rep);
    ConvergenceRow row;
    row.cells = n;
    row.err = error_norms(f, t, eos, exact, var);
    row.steps = rep.steps;
    row.wall_seconds = rep.wall_seconds;
    if (!rows.empty()) {
      const auto& prev = rows.back();
      const double h = std::log(static_cast<double>(n) / prev.cells);
      row.order_l1 = std::log(prev.err.l1 / row.err.l1) / h;
      row.order_l2 = std::log(prev.err.l2 / row.err.l2) / h;
      row.order_linf = std::log(prev.err.linf / row.err.linf) / h;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rhd
