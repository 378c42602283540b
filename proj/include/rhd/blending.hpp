#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/errors.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

/// Pointwise Rusanov flux between two admissible states in direction dir; false if either is not.
template <std::size_t N, int Dim = static_cast<int>(N) - 2>
bool try_low_order_flux(const std::array<double, N>& ul, const std::array<double, N>& ur, int dir, const Eos& eos, std::array<double, N>& out) {
  Primitive<Dim> wl, wr;
  if (recover_primitive(ul, eos, wl) != Recovery::ok) return false;
  if (recover_primitive(ur, eos, wr) != Recovery::ok) return false;
  const double lam = std::max(max_wave_speed(wl, eos, dir), max_wave_speed(wr, eos, dir));
  const State<Dim> fl = flux(ul, wl, dir);
  const State<Dim> fr = flux(ur, wr, dir);
  for (int c = 0; c < Dim + 2; ++c) out[c] = 0.5 * (fl[c] + fr[c]) - 0.5 * lam * (ur[c] - ul[c]);
  return true;
}

template <std::size_t N, int Dim = static_cast<int>(N) - 2>
State<Dim> low_order_flux(const std::array<double, N>& ul, const std::array<double, N>& ur, int dir, const Eos& eos) {
  State<Dim> out;
  if (!try_low_order_flux(ul, ur, dir, eos, out)) throw NotAdmissible("low-order flux on an inadmissible state");
  return out;
}

/// Rusanov fluxes on the N interior subcell faces of each line in each direction.
/// Layout: sub[d][line*N + i] is the face between nodes i and i+1.
template <int Dim>
bool subcell_fluxes(std::span<const State<Dim>> u, const BasisTables& t, const Eos& eos,
                    std::array<std::span<State<Dim>>, Dim> sub) {
  const NodeLayout<Dim> lay{t.size()};
  const int N = t.degree;
  for (int d = 0; d < Dim; ++d)
    for (int line = 0; line < lay.face_nodes(); ++line)
      for (int i = 0; i < N; ++i)
        if (!try_low_order_flux(u[lay.node(d, i, line)], u[lay.node(d, i + 1, line)], d, eos, sub[d][line * N + i]))
          return false;
  return true;
}

/// Subcell finite-volume update; subcell widths are w_i * dx. face_flux indexed [side*Nf + k].
/// In 2D the directional contributions are summed.
template <int Dim>
void low_order_subcell_update(std::span<const State<Dim>> u, std::array<std::span<const State<Dim>>, Dim> sub,
                              std::span<const State<Dim>> face_flux, const BasisTables& t,
                              const std::array<double, Dim>& ratio, std::span<State<Dim>> out) {
  const NodeLayout<Dim> lay{t.size()};
  const int N = t.degree;
  const int nf = lay.face_nodes();
  for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k];
  for (int d = 0; d < Dim; ++d)
    for (int line = 0; line < nf; ++line)
      for (int i = 0; i <= N; ++i) {
        const State<Dim>& fl = (i == 0) ? face_flux[(2 * d) * nf + line] : sub[d][line * N + i - 1];
        const State<Dim>& fr = (i == N) ? face_flux[(2 * d + 1) * nf + line] : sub[d][line * N + i];
        State<Dim>& o = out[lay.node(d, i, line)];
        const double c = ratio[d] / t.weights[i];
        for (int q = 0; q < Dim + 2; ++q) o[q] -= c * (fr[q] - fl[q]);
      }
}

template <std::size_t N, int Dim = static_cast<int>(N) - 2>
State<Dim> initial_blended_flux(const std::array<double, N>& high, const std::array<double, N>& low, double alpha) {
  State<Dim> out;
  for (int c = 0; c < Dim + 2; ++c) out[c] = (1.0 - alpha) * high[c] + alpha * low[c];
  return out;
}

/// One side of a face as seen by the flux correction: the adjacent node, the subcell flux on its
/// other side and c = dt / (k * w * dx). `sign` is +1 if the face is on the node's right.
template <int Dim>
struct FaceSide {
  const State<Dim>* node = nullptr;
  const State<Dim>* inner_flux = nullptr;
  double coeff = 0.0;
  double sign = 1.0;

  State<Dim> evolve(const State<Dim>& face) const {
    State<Dim> out = *node;
    for (int c = 0; c < Dim + 2; ++c) {
      const double diff = sign > 0 ? face[c] - (*inner_flux)[c] : (*inner_flux)[c] - face[c];
      out[c] -= coeff * diff;
    }
    return out;
  }
};

struct CorrectionReport {
  double theta_density = 1.0;
  double theta_pressure = 1.0;
};

/// Pulls the blended face flux towards the low-order flux until the evolved states adjacent to the
/// face keep at least a tenth of their low-order D and q.
template <int Dim>
State<Dim> correct_face_flux(const State<Dim>& candidate, const State<Dim>& low,
                             std::span<const FaceSide<Dim>> sides, CorrectionReport* report = nullptr,
                             double fraction = 0.1) {
  State<Dim> F = candidate;
  auto limit = [&](auto constraint) {
    double theta = 1.0;
    for (const auto& s : sides) {
      if (!s.node) continue;
      const double c_low = constraint(s.evolve(low));
      const double c_cand = constraint(s.evolve(F));
      const double target = fraction * c_low;
      if (c_cand < target) {
        const double denom = c_cand - c_low;
        const double th = (denom != 0.0) ? std::abs((target - c_low) / denom) : 0.0;
        theta = std::min(theta, c_low > 0.0 ? th : 0.0);
      }
    }
    theta = std::clamp(theta, 0.0, 1.0);
    if (theta < 1.0)
      for (int c = 0; c < Dim + 2; ++c) F[c] = theta * F[c] + (1.0 - theta) * low[c];
    return theta;
  };
  const double td = limit([](const State<Dim>& u) { return u[0]; });
  const double tq = limit([](const State<Dim>& u) { return q_constraint(u); });
  if (report) *report = {td, tq};
  return F;
}

template <int Dim>
void blend(std::span<const State<Dim>> high, std::span<const State<Dim>> low, double alpha,
           std::span<State<Dim>> out) {
  for (std::size_t k = 0; k < high.size(); ++k)
    for (int c = 0; c < Dim + 2; ++c) out[k][c] = (1.0 - alpha) * high[k][c] + alpha * low[k][c];
}

/// Largest theta in [0, 1] with q(mean + theta*(u - mean)) >= eps, assuming q(mean) >= eps.
template <std::size_t N, int Dim = static_cast<int>(N) - 2>
double q_scaling_factor(const std::array<double, N>& mean, const std::array<double, N>& u, double eps) {
  if (q_constraint(u) >= eps) return 1.0;
  /// q(mean + t*du) = eps  <=>  (E0 - eps + t*dE)^2 = |(D0, m0) + t*(dD, dm)|^2 with E0 - eps + t*dE >= 0
  State<Dim> du;
  for (int c = 0; c < Dim + 2; ++c) du[c] = u[c] - mean[c];
  const double e0 = mean[Dim + 1] - eps;
  const double de = du[Dim + 1];
  double a = de * de, b = e0 * de, c = e0 * e0;
  for (int k = 0; k <= Dim; ++k) {
    a -= du[k] * du[k];
    b -= mean[k] * du[k];
    c -= mean[k] * mean[k];
  }
  auto g = [&](double t) {
    State<Dim> s = mean;
    axpy(s, t, du);
    return q_constraint(s) - eps;
  };
  double theta = -1.0;
  if (std::abs(a) > 1e-300) {
    const double disc = b * b - a * c;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      /// numerically stable pair of roots of a t^2 + 2 b t + c
      const double qq = -(b + std::copysign(sq, b));
      double r1 = qq / a, r2 = (qq != 0.0) ? c / qq : r1;
      double best = 2.0;
      for (double r : {r1, r2})
        if (r >= 0.0 && r <= 1.0 && e0 + r * de >= 0.0) best = std::min(best, r);
      if (best <= 1.0) theta = best;
    }
  } else if (b != 0.0) {
    const double r = -c / (2.0 * b);
    if (r >= 0.0 && r <= 1.0) theta = r;
  }
  double lo = 0.0, hi = 1.0;
  if (theta >= 0.0 && g(theta) >= -1e-14 * std::max(1.0, std::abs(mean[Dim + 1]))) {
    if (g(theta) >= 0.0) return theta;
    /// root is right but rounding puts it just outside; settle it on the safe side
    hi = theta;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) >= 0.0) lo = mid; else hi = mid;
  }
  return lo;
}

/// Scales all nodes of an element towards its mean so that D and q stay above
/// eps = min(1e-13, constraint(mean)). Throws MeanNotAdmissible if the mean itself is outside.
template <int Dim>
double scaling_limiter(std::span<State<Dim>> nodes, const State<Dim>& mean) {
  const double q_mean = q_constraint(mean);
  if (!(mean[0] > 0.0) || !(q_mean > 0.0)) throw MeanNotAdmissible("element mean is not admissible");
  const double eps_d = std::min(1e-13, mean[0]);
  const double eps_q = std::min(1e-13, q_mean);
  double theta = 1.0;
  for (const auto& u : nodes) {
    if (u[0] < eps_d) theta = std::min(theta, (mean[0] - eps_d) / (mean[0] - u[0]));
  }
  if (theta < 1.0)
    for (auto& u : nodes)
      for (int c = 0; c < Dim + 2; ++c) u[c] = mean[c] + theta * (u[c] - mean[c]);
  double theta_q = 1.0;
  for (const auto& u : nodes) theta_q = std::min(theta_q, q_scaling_factor(mean, u, eps_q));
  if (theta_q < 1.0)
    for (auto& u : nodes)
      for (int c = 0; c < Dim + 2; ++c) u[c] = mean[c] + theta_q * (u[c] - mean[c]);
  return theta * theta_q;
}

}  // namespace rhd
