#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/boundary.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

inline double minmod(double a, double b, double c) {
  if (a > 0.0 && b > 0.0 && c > 0.0) return std::min({a, b, c});
  if (a < 0.0 && b < 0.0 && c < 0.0) return std::max({a, b, c});
  return 0.0;
}

inline double minmod_tvb(double a, double b, double c, double bound) {
  return std::abs(a) <= bound ? a : minmod(a, b, c);
}

/// Componentwise minmod-TVB limiter on conserved variables. Troubled components are replaced by a
/// linear polynomial with the limited slopes. Comparison mode only; no admissibility control.
template <int Dim>
int tvb_limit(SolutionField<Dim>& field, const BasisTables& t, const BoundarySpec<Dim>& bc, double tvb_m) {
  const Mesh<Dim>& mesh = field.mesh;
  const NodeLayout<Dim>& lay = field.layout;
  const int ne = mesh.num_elements();
  const int nf = lay.face_nodes();
  std::vector<State<Dim>> means(ne);
  for (int e = 0; e < ne; ++e) means[e] = field.mean(e, t);
  /// face-averaged traces, computed before any element is modified
  std::vector<std::array<State<Dim>, 2 * Dim>> face_avg(ne);
  for (int e = 0; e < ne; ++e) {
    const auto el = field.element(e);
    for (int d = 0; d < Dim; ++d)
      for (int s = 0; s < 2; ++s) {
        State<Dim> acc{};
        const auto& ex = t.extrap(s);
        for (int line = 0; line < nf; ++line) {
          const double wl = (Dim == 1) ? 1.0 : t.weights[line];
          for (int pos = 0; pos < lay.n; ++pos) axpy(acc, wl * ex[pos], el[lay.node(d, pos, line)]);
        }
        face_avg[e][2 * d + s] = acc;
      }
  }
  int limited_elements = 0;
  for (int e = 0; e < ne; ++e) {
    std::array<std::array<double, Dim>, Dim + 2> slope{};
    std::array<bool, Dim + 2> troubled{};
    for (int d = 0; d < Dim; ++d) {
      const int lo = neighbor_element(mesh, bc, e, d, 0);
      const int hi = neighbor_element(mesh, bc, e, d, 1);
      const double bound = tvb_m * mesh.step(d) * mesh.step(d);
      for (int c = 0; c < Dim + 2; ++c) {
        const double ub = means[e][c];
        const double dp = (hi >= 0 ? means[hi][c] : ub) - ub;
        const double dm = ub - (lo >= 0 ? means[lo][c] : ub);
        const double devr = face_avg[e][2 * d + 1][c] - ub;
        const double devl = ub - face_avg[e][2 * d][c];
        const double mr = minmod_tvb(devr, dp, dm, bound);
        const double ml = minmod_tvb(devl, dp, dm, bound);
        if (mr != devr || ml != devl) troubled[c] = true;
        slope[c][d] = 0.5 * (mr + ml);
      }
    }
    bool any = false;
    auto el = field.element(e);
    for (int c = 0; c < Dim + 2; ++c) {
      if (!troubled[c]) continue;
      any = true;
      for (int k = 0; k < lay.nodes(); ++k) {
        double v = means[e][c];
        v += slope[c][0] * (2.0 * t.nodes[k % lay.n] - 1.0);
        if constexpr (Dim == 2) v += slope[c][1] * (2.0 * t.nodes[k / lay.n] - 1.0);
        el[k][c] = v;
      }
    }
    limited_elements += any ? 1 : 0;
  }
  return limited_elements;
}

}  // namespace rhd
