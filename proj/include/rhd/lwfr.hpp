#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "rhd/alw.hpp"
#include "rhd/basis.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

/// Dissipative numerical flux on time-averaged traces: 0.5(Fl+Fr) - 0.5*lambda*(Ur-Ul).
template <std::size_t N, int Dim = static_cast<int>(N) - 2>
State<Dim> rusanov_face_flux(const std::array<double, N>& Fl, const std::array<double, N>& Fr, const std::array<double, N>& Ul,
                             const std::array<double, N>& Ur, double lambda) {
  State<Dim> out;
  for (int c = 0; c < Dim + 2; ++c) out[c] = 0.5 * (Fl[c] + Fr[c]) - 0.5 * lambda * (Ur[c] - Ul[c]);
  return out;
}

/// u^H = u - sum_d dt/dx_d * dF_h/dxi_d at the nodes. face_flux holds [side*Nf + k], side = 2d+s.
template <int Dim>
void high_order_update(std::span<const State<Dim>> u, const std::array<std::span<const State<Dim>>, Dim>& F,
                       std::span<const State<Dim>> face_flux, const BasisTables& t,
                       const std::array<double, Dim>& ratio, std::span<State<Dim>> out) {
  const NodeLayout<Dim> lay{t.size()};
  const int n = lay.n;
  const int nf = lay.face_nodes();
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k];
  for (int d = 0; d < Dim; ++d) {
    for (int line = 0; line < nf; ++line) {
      State<Dim> jump_l = face_flux[(2 * d) * nf + line];
      State<Dim> jump_r = face_flux[(2 * d + 1) * nf + line];
      for (int pos = 0; pos < n; ++pos) {
        const State<Dim>& Fk = F[d][lay.node(d, pos, line)];
        axpy(jump_l, -t.extrap_left[pos], Fk);
        axpy(jump_r, -t.extrap_right[pos], Fk);
      }
      for (int i = 0; i < n; ++i) {
        State<Dim> deriv{};
        axpy(deriv, t.radau_left[i], jump_l);
        axpy(deriv, t.radau_right[i], jump_r);
        for (int l = 0; l < n; ++l) axpy(deriv, t.d(i, l), F[d][lay.node(d, l, line)]);
        axpy(out[lay.node(d, i, line)], -ratio[d], deriv);
      }
    }
  }
}

/// dt = safety * cfl / max_e sum_d Lambda_d(mean_e)/dx_d. wave_speed[e][d] from element means.
template <int Dim>
double compute_dt(const std::vector<std::type_identity_t<std::array<double, Dim>>>& wave_speed, const Mesh<Dim>& mesh, double cfl,
                  double safety) {
  double worst = 0.0;
  for (const auto& lam : wave_speed) {
    double s = 0.0;
    for (int d = 0; d < Dim; ++d) s += lam[d] / mesh.step(d);
    worst = std::max(worst, s);
  }
  if (!(worst > 0.0)) return std::numeric_limits<double>::infinity();
  return safety * cfl / worst;
}

}  // namespace rhd
