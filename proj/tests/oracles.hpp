#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "rhd/alw.hpp"
#include "rhd/problems.hpp"
#include "rhd/solver.hpp"

namespace rhd::oracle {

/// Test seam: f_d(u) = a_d * u componentwise.
template <int Dim>
struct LinearFlux {
  std::array<double, Dim> a{};
  bool evaluate(const State<Dim>& u, std::array<State<Dim>, Dim>& f) const {
    for (int d = 0; d < Dim; ++d)
      for (int c = 0; c < Dim + 2; ++c) f[d][c] = a[d] * u[c];
    return true;
  }
};

/// Dense operator L = -sum_d ratio_d a_d D_d acting on one scalar nodal array.
template <int Dim>
std::vector<double> linear_operator(const BasisTables& t, const std::array<double, Dim>& a,
                                    const std::array<double, Dim>& ratio) {
  const NodeLayout<Dim> lay{t.size()};
  const int np = lay.nodes();
  std::vector<double> L(np * np, 0.0);
  for (int d = 0; d < Dim; ++d)
    for (int line = 0; line < lay.face_nodes(); ++line)
      for (int i = 0; i < lay.n; ++i)
        for (int l = 0; l < lay.n; ++l)
          L[lay.node(d, i, line) * np + lay.node(d, l, line)] -= ratio[d] * a[d] * t.d(i, l);
  return L;
}

inline std::vector<double> matvec(const std::vector<double>& A, const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += A[i * n + j] * x[j];
  return y;
}

/// Largest deviation of U, F and the face traces from the truncated series
/// F_d = a_d sum_{m=0}^{N} L^m u / (m+1)!, U = sum_m L^m u / (m+1)!, on random nodal data.
/// Returns infinity if the procedure reports a failure.
template <int Dim>
double linear_seam_deviation(int N, unsigned seed = 11) {
  const BasisTables t = build_basis(N);
  std::mt19937 rng(seed + N);
  std::uniform_real_distribution<double> U01(-1.0, 1.0);
  ElementWorkspace<Dim> ws(N);
  for (auto& s : ws.u)
    for (auto& c : s) c = U01(rng);
  LinearFlux<Dim> model;
  std::array<double, Dim> ratio{};
  for (int d = 0; d < Dim; ++d) {
    model.a[d] = 0.3 + 0.4 * d;
    ratio[d] = 0.07 + 0.02 * d;
  }
  FaceTraces<Dim> tr;
  if (alw_time_average(ws, t, ratio, model) != AlwStatus::ok) return INFINITY;
  if (alw_face_traces(ws, t, model, tr) != AlwStatus::ok) return INFINITY;
  const auto L = linear_operator<Dim>(t, model.a, ratio);
  const NodeLayout<Dim> lay{t.size()};
  const int np = lay.nodes();
  double worst = 0.0;
  auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
  for (int c = 0; c < Dim + 2; ++c) {
    std::vector<double> term(np), sum(np, 0.0);
    for (int k = 0; k < np; ++k) term[k] = ws.u[k][c];
    for (int m = 0; m <= N; ++m) {
      for (int k = 0; k < np; ++k) sum[k] += term[k] / kFactorial[m + 1];
      term = matvec(L, term);
    }
    for (int k = 0; k < np; ++k) {
      track(ws.U[k][c], sum[k]);
      for (int d = 0; d < Dim; ++d) track(ws.F[d][k][c], model.a[d] * sum[k]);
    }
    /// traces: the series extrapolated to each face, normal flux only
    for (int d = 0; d < Dim; ++d)
      for (int s = 0; s < 2; ++s)
        for (int line = 0; line < lay.face_nodes(); ++line) {
          double v = 0.0;
          for (int pos = 0; pos < lay.n; ++pos) v += t.extrap(s)[pos] * sum[lay.node(d, pos, line)];
          const int idx = (2 * d + s) * lay.face_nodes() + line;
          track(tr.solution[idx][c], v);
          track(tr.flux[idx][c], model.a[d] * v);
        }
  }
  return worst;
}

/// Largest nodal change after one step from a uniform moving state on a 6^Dim mesh.
template <int Dim>
double free_stream_defect(ProblemSpec<Dim> spec, LimiterKind limiter, int degree) {
  spec.initial = [](const Point<Dim>&) {
    Primitive<Dim> w{0.8, {}, 1.7};
    w.v[0] = 0.6;
    if constexpr (Dim == 2) w.v[1] = -0.3;
    return w;
  };
  RunConfig cfg;
  cfg.degree = degree;
  cfg.limiter = limiter;
  cfg.cells.assign(Dim, 6);
  cfg.max_steps = 1;
  Solver<Dim> solver(spec, cfg);
  const auto before = solver.field().nodes;
  solver.step();
  double worst = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k)
    for (int c = 0; c < Dim + 2; ++c) worst = std::max(worst, std::abs(solver.field().nodes[k][c] - before[k][c]));
  return worst;
}

}  // namespace rhd::oracle
