#pragma once

#include <array>
#include <concepts>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

/// Anything that maps a conserved state to its Dim directional fluxes, failing on bad input.
template <class Model, int Dim>
concept FluxModel = requires(const Model& m, const State<Dim>& u, std::array<State<Dim>, Dim>& f) {
  { m.evaluate(u, f) } -> std::convertible_to<bool>;
};

/// Central difference in time for the r-th flux derivative.
/// f^(r) ~ center*f(u) + sum weight_k * f(S(shift_k)), S(k) = sum_{j<=r} k^j u^(j) / j!.
struct TimeStencil {
  int order = 0;
  int terms = 0;
  std::array<int, 4> shift{};
  std::array<double, 4> weight{};
  double center = 0.0;
};

inline TimeStencil time_stencil(int degree, int r) {
  require_degree(degree);
  if (r < 1 || r > degree) throw std::invalid_argument("stencil order out of range");
  TimeStencil s;
  s.order = r;
  const bool wide = degree >= 3;
  if (r == 1) {
    if (!wide) {
      s.terms = 2;
      s.shift = {1, -1, 0, 0};
      s.weight = {0.5, -0.5, 0.0, 0.0};
    } else {
      s.terms = 4;
      s.shift = {2, 1, -1, -2};
      s.weight = {-1.0 / 12.0, 8.0 / 12.0, -8.0 / 12.0, 1.0 / 12.0};
    }
  } else if (r == 2) {
    if (degree <= 3) {
      s.terms = 2;
      s.shift = {1, -1, 0, 0};
      s.weight = {1.0, 1.0, 0.0, 0.0};
      s.center = -2.0;
    } else {
      s.terms = 4;
      s.shift = {2, 1, -1, -2};
      s.weight = {-1.0 / 12.0, 16.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0};
      s.center = -30.0 / 12.0;
    }
  } else if (r == 3) {
    s.terms = 4;
    s.shift = {2, 1, -1, -2};
    s.weight = {0.5, -1.0, 1.0, -0.5};
  } else {
    s.terms = 4;
    s.shift = {2, 1, -1, -2};
    s.weight = {1.0, -4.0, -4.0, 1.0};
    s.center = 6.0;
  }
  return s;
}

inline constexpr std::array<double, 6> kFactorial = {1.0, 1.0, 2.0, 6.0, 24.0, 120.0};

enum class AlwStatus { ok, base_inadmissible, perturbed_inadmissible };

/// Per-element scratch for the approximate Lax-Wendroff procedure.
template <int Dim>
struct ElementWorkspace {
  int degree = 1;
  NodeLayout<Dim> layout;
  std::vector<State<Dim>> u;                       ///< nodal solution (alias of u_k[0])
  std::vector<std::vector<State<Dim>>> u_k;        ///< time derivatives times dt^m, m = 0..N
  std::array<std::vector<State<Dim>>, Dim> F;      ///< time-averaged fluxes at nodes
  std::vector<State<Dim>> U;                       ///< time-averaged solution at nodes
  std::array<std::vector<State<Dim>>, Dim> f_base; ///< f(u) at nodes
  std::array<std::vector<State<Dim>>, Dim> f_r;    ///< current flux derivative
  std::vector<std::vector<State<Dim>>> face_u;     ///< extrapolated u^(m) along one face

  explicit ElementWorkspace(int deg = 1) : degree(deg), layout{deg + 1} {
    const std::size_t np = layout.nodes();
    u.assign(np, State<Dim>{});
    u_k.assign(deg + 1, std::vector<State<Dim>>(np));
    U.assign(np, State<Dim>{});
    for (int d = 0; d < Dim; ++d) {
      F[d].assign(np, State<Dim>{});
      f_base[d].assign(np, State<Dim>{});
      f_r[d].assign(np, State<Dim>{});
    }
    face_u.assign(deg + 1, std::vector<State<Dim>>(layout.face_nodes()));
  }
};

/// Time-averaged traces on the 2*Dim faces of an element: normal flux and solution.
template <int Dim>
struct FaceTraces {
  std::vector<State<Dim>> flux;      ///< [side*Nf + k], side = 2*d + s
  std::vector<State<Dim>> solution;
};

namespace detail {

template <int Dim>
State<Dim> shifted_state(const std::vector<std::vector<State<Dim>>>& uk, std::size_t node, int r, int k) {
  State<Dim> s = uk[0][node];
  double coef = 1.0;
  for (int j = 1; j <= r; ++j) {
    coef *= static_cast<double>(k) / j;
    axpy(s, coef, uk[j][node]);
  }
  return s;
}

/// out[node] = -sum_d (dt/dx_d) * (D_d fl[d])[node]
template <int Dim>
void time_derivative(const std::array<std::vector<State<Dim>>, Dim>& fl, const BasisTables& t,
                     const NodeLayout<Dim>& lay, const std::array<double, Dim>& ratio,
                     std::vector<State<Dim>>& out) {
  const int n = lay.n;
  for (auto& s : out) s.fill(0.0);
  for (int d = 0; d < Dim; ++d) {
    for (int line = 0; line < lay.face_nodes(); ++line) {
      for (int i = 0; i < n; ++i) {
        State<Dim>& o = out[lay.node(d, i, line)];
        for (int l = 0; l < n; ++l) axpy(o, -ratio[d] * t.d(i, l), fl[d][lay.node(d, l, line)]);
      }
    }
  }
}

}  // namespace detail

/// Fills ws.F and ws.U from ws.u. ratio[d] = dt/dx_d.
template <int Dim, class Model>
  requires FluxModel<Model, Dim>
AlwStatus alw_time_average(ElementWorkspace<Dim>& ws, const BasisTables& t, const std::type_identity_t<std::array<double, Dim>>& ratio,
                           const Model& model) {
  const int N = ws.degree;
  const std::size_t np = ws.layout.nodes();
  std::array<State<Dim>, Dim> f;
  ws.u_k[0] = ws.u;
  for (std::size_t k = 0; k < np; ++k) {
    if (!model.evaluate(ws.u[k], f)) return AlwStatus::base_inadmissible;
    for (int d = 0; d < Dim; ++d) ws.f_base[d][k] = ws.F[d][k] = f[d];
  }
  detail::time_derivative<Dim>(ws.f_base, t, ws.layout, ratio, ws.u_k[1]);
  for (int r = 1; r <= N; ++r) {
    const TimeStencil st = time_stencil(N, r);
    for (std::size_t k = 0; k < np; ++k) {
      for (int d = 0; d < Dim; ++d) {
        ws.f_r[d][k].fill(0.0);
        if (st.center != 0.0) axpy(ws.f_r[d][k], st.center, ws.f_base[d][k]);
      }
      for (int s = 0; s < st.terms; ++s) {
        if (!model.evaluate(detail::shifted_state<Dim>(ws.u_k, k, r, st.shift[s]), f))
          return AlwStatus::perturbed_inadmissible;
        for (int d = 0; d < Dim; ++d) axpy(ws.f_r[d][k], st.weight[s], f[d]);
      }
      for (int d = 0; d < Dim; ++d) axpy(ws.F[d][k], 1.0 / kFactorial[r + 1], ws.f_r[d][k]);
    }
    if (r < N) detail::time_derivative<Dim>(ws.f_r, t, ws.layout, ratio, ws.u_k[r + 1]);
  }
  for (std::size_t k = 0; k < np; ++k) {
    ws.U[k] = ws.u[k];
    for (int m = 1; m <= N; ++m) axpy(ws.U[k], 1.0 / kFactorial[m + 1], ws.u_k[m][k]);
  }
  return AlwStatus::ok;
}

/// Applies the stencils to u^(m) extrapolated onto every face. Requires a prior alw_time_average.
template <int Dim, class Model>
  requires FluxModel<Model, Dim>
AlwStatus alw_face_traces(ElementWorkspace<Dim>& ws, const BasisTables& t, const Model& model,
                          FaceTraces<Dim>& out) {
  const int N = ws.degree;
  const int n = ws.layout.n;
  const int nf = ws.layout.face_nodes();
  out.flux.resize(2 * Dim * nf);
  out.solution.resize(2 * Dim * nf);
  std::array<State<Dim>, Dim> f;
  for (int d = 0; d < Dim; ++d) {
    for (int s = 0; s < 2; ++s) {
      const auto& e = t.extrap(s);
      const int side = 2 * d + s;
      for (int line = 0; line < nf; ++line) {
        State<Dim> Ut{};
        for (int m = 0; m <= N; ++m) ws.face_u[m][line].fill(0.0);
        for (int pos = 0; pos < n; ++pos) {
          const int node = ws.layout.node(d, pos, line);
          for (int m = 0; m <= N; ++m) axpy(ws.face_u[m][line], e[pos], ws.u_k[m][node]);
          axpy(Ut, e[pos], ws.U[node]);
        }
        if (!model.evaluate(ws.face_u[0][line], f)) return AlwStatus::perturbed_inadmissible;
        const State<Dim> f0 = f[d];
        State<Dim> Ft = f0;
        for (int r = 1; r <= N; ++r) {
          const TimeStencil st = time_stencil(N, r);
          State<Dim> fr{};
          if (st.center != 0.0) axpy(fr, st.center, f0);
          for (int k = 0; k < st.terms; ++k) {
            if (!model.evaluate(detail::shifted_state<Dim>(ws.face_u, line, r, st.shift[k]), f))
              return AlwStatus::perturbed_inadmissible;
            axpy(fr, st.weight[k], f[d]);
          }
          axpy(Ft, 1.0 / kFactorial[r + 1], fr);
        }
        out.flux[side * nf + line] = Ft;
        out.solution[side * nf + line] = Ut;
      }
    }
  }
  return AlwStatus::ok;
}

/// First-order replacement used when the stencil states leave the admissible set:
/// fluxes frozen at t^n, traces taken from the node nearest to each face.
template <int Dim, class Model>
  requires FluxModel<Model, Dim>
bool first_order_fallback(ElementWorkspace<Dim>& ws, const Model& model, FaceTraces<Dim>& out) {
  const int n = ws.layout.n;
  const int nf = ws.layout.face_nodes();
  std::array<State<Dim>, Dim> f;
  for (std::size_t k = 0; k < ws.u.size(); ++k) {
    if (!model.evaluate(ws.u[k], f)) return false;
    for (int d = 0; d < Dim; ++d) ws.F[d][k] = f[d];
    ws.U[k] = ws.u[k];
  }
  out.flux.resize(2 * Dim * nf);
  out.solution.resize(2 * Dim * nf);
  for (int d = 0; d < Dim; ++d)
    for (int s = 0; s < 2; ++s)
      for (int line = 0; line < nf; ++line) {
        const int node = ws.layout.node(d, s == 0 ? 0 : n - 1, line);
        out.flux[(2 * d + s) * nf + line] = ws.F[d][node];
        out.solution[(2 * d + s) * nf + line] = ws.u[node];
      }
  return true;
}

}  // namespace rhd
