#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/errors.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

struct IndicatorConfig {
  double upper = 0.009;
  double lower = 0.009 / 1000.0;
  double alpha_max = 1.0;

  void validate() const {
    if (!(lower > 0.0 && lower < upper)) throw ConfigError("indicator thresholds require 0 < lower < upper");
    if (!(alpha_max >= 0.0 && alpha_max <= 1.0)) throw ConfigError("alpha_max must lie in [0, 1]");
  }
};

/// Smoothness variable rho * p * W.
template <int Dim>
double indicator_quantity(const Primitive<Dim>& w) {
  return w.rho * w.p * lorentz_factor(w);
}

namespace detail {

template <int Dim>
double face_value(std::span<const double> K, const BasisTables& t, int d, int s, int line) {
  const NodeLayout<Dim> lay{t.size()};
  const auto& e = t.extrap(s);
  double v = 0.0;
  for (int pos = 0; pos < lay.n; ++pos) v += e[pos] * K[lay.node(d, pos, line)];
  return v;
}

inline double corner_value(std::span<const double> K, const BasisTables& t, int sx, int sy) {
  const int n = t.size();
  const auto& ex = t.extrap(sx);
  const auto& ey = t.extrap(sy);
  double v = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) v += ex[i] * ey[j] * K[i + n * j];
  return v;
}

}  // namespace detail

/// Nodal K extended to {0, xi_0..xi_N, 1}^Dim. Face entries average the element's own extrapolation
/// with the face neighbour's; corners average own, x-neighbour and y-neighbour corner values.
/// neighbours[2d+s] are nodal arrays of the adjacent (or ghost) elements.
template <int Dim>
std::vector<double> extended_field(std::span<const double> K, const std::array<std::span<const double>, 2 * Dim>& nb,
                                   const BasisTables& t) {
  const int n = t.size();
  const int m = n + 2;
  if constexpr (Dim == 1) {
    std::vector<double> g(m);
    for (int i = 0; i < n; ++i) g[i + 1] = K[i];
    g[0] = 0.5 * (detail::face_value<1>(K, t, 0, 0, 0) + detail::face_value<1>(nb[0], t, 0, 1, 0));
    g[m - 1] = 0.5 * (detail::face_value<1>(K, t, 0, 1, 0) + detail::face_value<1>(nb[1], t, 0, 0, 0));
    return g;
  } else {
    std::vector<double> g(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) g[(i + 1) + m * (j + 1)] = K[i + n * j];
    for (int line = 0; line < n; ++line) {
      g[0 + m * (line + 1)] = 0.5 * (detail::face_value<2>(K, t, 0, 0, line) + detail::face_value<2>(nb[0], t, 0, 1, line));
      g[(m - 1) + m * (line + 1)] =
          0.5 * (detail::face_value<2>(K, t, 0, 1, line) + detail::face_value<2>(nb[1], t, 0, 0, line));
      g[(line + 1) + 0] = 0.5 * (detail::face_value<2>(K, t, 1, 0, line) + detail::face_value<2>(nb[2], t, 1, 1, line));
      g[(line + 1) + m * (m - 1)] =
          0.5 * (detail::face_value<2>(K, t, 1, 1, line) + detail::face_value<2>(nb[3], t, 1, 0, line));
    }
    for (int sy = 0; sy < 2; ++sy)
      for (int sx = 0; sx < 2; ++sx) {
        const double own = detail::corner_value(K, t, sx, sy);
        const double xn = detail::corner_value(nb[sx], t, 1 - sx, sy);
        const double yn = detail::corner_value(nb[2 + sy], t, sx, 1 - sy);
        g[(sx ? m - 1 : 0) + m * (sy ? m - 1 : 0)] = (own + xn + yn) / 3.0;
      }
    return g;
  }
}

/// Fraction of energy in the modes above degree N relative to all non-constant modes.
template <int Dim>
double energy_ratio(std::span<const double> grid, const ModalTransform& T, int degree) {
  const std::vector<double> c = (Dim == 1) ? T.apply(grid) : T.apply2d(grid);
  const int m = T.size();
  double total = 0.0, low = 0.0;
  for (int l = 0; l < (Dim == 1 ? 1 : m); ++l)
    for (int k = 0; k < m; ++k) {
      const double e = c[k + m * l] * c[k + m * l];
      total += e;
      if (k <= degree && l <= degree) low += e;
    }
  const double denom = total - c[0] * c[0];
  /// relative guard: below ~1e-12 relative variation the modes are rounding noise
  if (!(denom > std::max(1e-30, 1e-24 * total))) return 0.0;
  return std::max(0.0, (total - low) / denom);
}

inline double alpha_from_energy(double E, const IndicatorConfig& cfg) {
  if (E < cfg.lower) return 0.0;
  if (E > cfg.upper) return cfg.alpha_max;
  const double y = std::log(E / cfg.lower) / std::log(cfg.upper / cfg.lower);
  return cfg.alpha_max * std::sin(0.5 * std::numbers::pi * y * y);
}

/// Smoothed element and face blending coefficients.
template <int Dim>
struct BlendCoefficients {
  std::vector<double> element;
  std::array<std::vector<double>, Dim> face;  ///< indexed by Mesh::face_index
};

/// Face alpha = mean of its two elements; boundary faces take the interior value.
template <int Dim>
void face_alpha(const Mesh<Dim>& mesh, const std::type_identity_t<std::array<bool, Dim>>& periodic, BlendCoefficients<Dim>& out) {
  for (int d = 0; d < Dim; ++d) {
    out.face[d].assign(mesh.num_faces(d), 0.0);
    const int ntrans = (Dim == 1) ? 1 : mesh.cells[1 - d];
    for (int tr = 0; tr < ntrans; ++tr)
      for (int f = 0; f <= mesh.cells[d]; ++f) {
        int l = mesh.face_element(d, f, tr, 0);
        int r = mesh.face_element(d, f, tr, 1);
        if (periodic[d]) {
          if (l < 0) l = mesh.face_element(d, mesh.cells[d], tr, 0);
          if (r < 0) r = mesh.face_element(d, 0, tr, 1);
        }
        double a;
        if (l >= 0 && r >= 0) a = 0.5 * (out.element[l] + out.element[r]);
        else a = out.element[l >= 0 ? l : r];
        out.face[d][mesh.face_index(d, f, tr)] = a;
      }
  }
}

/// alpha_e = max(alpha'_e, alpha'_nb / 2) over face neighbours; periodic[d] wraps neighbours in direction d.
template <int Dim>
BlendCoefficients<Dim> smooth_alpha(const Mesh<Dim>& mesh, const std::vector<double>& raw,
                                    const std::type_identity_t<std::array<bool, Dim>>& periodic) {
  BlendCoefficients<Dim> out;
  out.element = raw;
  const int ne = mesh.num_elements();
  for (int e = 0; e < ne; ++e) {
    const auto c = mesh.coords(e);
    for (int d = 0; d < Dim; ++d)
      for (int s = -1; s <= 1; s += 2) {
        auto cn = c;
        cn[d] += s;
        if (cn[d] < 0 || cn[d] >= mesh.cells[d]) {
          if (!periodic[d]) continue;
          cn[d] = (cn[d] + mesh.cells[d]) % mesh.cells[d];
        }
        out.element[e] = std::max(out.element[e], 0.5 * raw[mesh.index(cn)]);
      }
  }
  face_alpha(mesh, periodic, out);
  return out;
}

/// Modal-energy indicator on rho*p over the N+1 solution points with a logistic map.
struct LegacyIndicator {
  int degree = 1;
  double alpha_max = 1.0;
  double alpha_min = 0.001;
  double sharpness = 9.21024;
  std::vector<double> modal;  ///< orthonormal Legendre projection at the Gauss nodes

  LegacyIndicator(const BasisTables& t, double amax) : degree(t.degree), alpha_max(amax) {
    const int n = t.size();
    modal.assign(n * n, 0.0);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        modal[k * n + i] = t.weights[i] * std::sqrt(2.0 * k + 1.0) * legendre(k, 2.0 * t.nodes[i] - 1.0).value;
  }

  double threshold() const { return 0.5 * std::pow(10.0, -1.8 * std::pow(degree + 1.0, 0.25)); }

  template <int Dim>
  double operator()(std::span<const double> values) const {
    const int n = degree + 1;
    std::vector<double> c(values.size(), 0.0);
    if constexpr (Dim == 1) {
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) c[k] += modal[k * n + i] * values[i];
    } else {
      std::vector<double> tmp(values.size(), 0.0);
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int i = 0; i < n; ++i) tmp[k + n * j] += modal[k * n + i] * values[i + n * j];
      for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
          for (int j = 0; j < n; ++j) c[k + n * l] += modal[l * n + j] * tmp[k + n * j];
    }
    auto clipped = [&](int top) {
      double s = 0.0;
      for (int l = 0; l < (Dim == 1 ? 1 : n); ++l)
        for (int k = 0; k < n; ++k)
          if (k <= top && (Dim == 1 || l <= top)) s += c[k + n * l] * c[k + n * l];
      return s;
    };
    const double total = clipped(degree);
    const double clip1 = clipped(degree - 1);
    if (!(total > 1e-30)) return 0.0;
    double energy = (total - clip1) / total;
    if (degree >= 2 && clip1 > 1e-30) energy = std::max(energy, (clip1 - clipped(degree - 2)) / clip1);
    const double T = threshold();
    double a = 1.0 / (1.0 + std::exp(-sharpness / T * (energy - T)));
    if (a < alpha_min) a = 0.0;
    else if (a > 1.0 - alpha_min) a = 1.0;
    return std::min(alpha_max, a);
  }
};

}  // namespace rhd
