#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "rhd/errors.hpp"

namespace rhd {

inline constexpr int kMinDegree = 1;
inline constexpr int kMaxDegree = 4;

struct LegendreValue {
  double value;
  double derivative;
};

/// P_n(x) and P_n'(x) on [-1, 1] by the three-term recurrence.
inline LegendreValue legendre(int n, double x) {
  if (n == 0) return {1.0, 0.0};
  double p0 = 1.0, p1 = x;
  double d0 = 0.0, d1 = 1.0;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    const double d2 = d0 + (2.0 * k - 1.0) * p1;
    p0 = p1; p1 = p2;
    d0 = d1; d1 = d2;
  }
  return {p1, d1};
}

/// Quadrature rule on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int npoints) {
  if (npoints < 1) throw std::invalid_argument("quadrature needs at least one point");
  GaussRule rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  for (int k = 0; k < npoints; ++k) {
    /// Chebyshev-like start, ascending order
    double x = -std::cos(std::numbers::pi * (k + 0.75) / (npoints + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(npoints, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    const double dp = legendre(npoints, x).derivative;
    rule.nodes[k] = 0.5 * (x + 1.0);
    rule.weights[k] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

/// Lagrange basis through nodes, evaluated at x.
inline std::vector<double> lagrange_values(std::span<const double> nodes, double x) {
  const std::size_t n = nodes.size();
  std::vector<double> l(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m)
      if (m != j) l[j] *= (x - nodes[m]) / (nodes[j] - nodes[m]);
  return l;
}

/// Row-major D[i*n + j] = l_j'(x_i).
inline std::vector<double> differentiation_matrix(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  std::vector<double> bary(n, 1.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m)
      if (m != j) bary[j] *= nodes[j] - nodes[m];
  std::vector<double> D(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      D[i * n + j] = (bary[i] / bary[j]) / (nodes[i] - nodes[j]);
      diag -= D[i * n + j];
    }
    D[i * n + i] = diag;
  }
  return D;
}

/// Nodal tables for degree-N Gauss-Legendre solution points on [0, 1].
struct BasisTables {
  int degree = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> diff;
  std::vector<double> extrap_left;   ///< l_i(0)
  std::vector<double> extrap_right;  ///< l_i(1)
  std::vector<double> radau_left;    ///< c_L'(xi_i)
  std::vector<double> radau_right;   ///< c_R'(xi_i)

  int size() const { return degree + 1; }
  double d(int i, int j) const { return diff[i * (degree + 1) + j]; }
  const std::vector<double>& extrap(int side) const { return side == 0 ? extrap_left : extrap_right; }
};

inline void require_degree(int degree) {
  if (degree < kMinDegree || degree > kMaxDegree)
    throw UnsupportedDegree("polynomial degree must be in 1..4, got " + std::to_string(degree));
}

inline BasisTables build_basis(int degree) {
  require_degree(degree);
  BasisTables t;
  t.degree = degree;
  const GaussRule rule = gauss_legendre(degree + 1);
  t.nodes = rule.nodes;
  t.weights = rule.weights;
  t.diff = differentiation_matrix(t.nodes);
  t.extrap_left = lagrange_values(t.nodes, 0.0);
  t.extrap_right = lagrange_values(t.nodes, 1.0);
  const double sign = (degree % 2 == 0) ? 1.0 : -1.0;
  for (double xi : t.nodes) {
    const double x = 2.0 * xi - 1.0;
    const double dn = legendre(degree, x).derivative;
    const double dn1 = legendre(degree + 1, x).derivative;
    t.radau_left.push_back(sign * (dn - dn1));
    t.radau_right.push_back(dn + dn1);
  }
  return t;
}

/// Value of a nodal polynomial at the left (side 0) or right (side 1) end.
template <class T>
T extrapolate_to_face(std::span<const T> nodal, int side, const BasisTables& t) {
  const auto& e = t.extrap(side);
  T out{};
  for (std::size_t i = 0; i < nodal.size(); ++i) {
    if constexpr (std::is_arithmetic_v<T>) {
      out += e[i] * nodal[i];
    } else {
      for (std::size_t c = 0; c < out.size(); ++c) out[c] += e[i] * nodal[i][c];
    }
  }
  return out;
}

inline double gauss_quadrature(std::span<const double> values, std::span<const double> weights) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

/// Projection of a nodal polynomial onto P_k(2x-1), coefficient c_k = (2k+1) * int K P_k.
class ModalTransform {
 public:
  explicit ModalTransform(std::vector<double> points) : points_(std::move(points)) {
    const int m = size();
    const GaussRule q = gauss_legendre(m);
    matrix_.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int iq = 0; iq < m; ++iq) {
      const std::vector<double> l = lagrange_values(points_, q.nodes[iq]);
      for (int k = 0; k < m; ++k) {
        const double pk = legendre(k, 2.0 * q.nodes[iq] - 1.0).value;
        for (int a = 0; a < m; ++a) matrix_[k * m + a] += (2.0 * k + 1.0) * q.weights[iq] * pk * l[a];
      }
    }
  }

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<double>& points() const { return points_; }
  double operator()(int k, int a) const { return matrix_[k * size() + a]; }

  std::vector<double> apply(std::span<const double> values) const {
    const int m = size();
    std::vector<double> c(m, 0.0);
    for (int k = 0; k < m; ++k)
      for (int a = 0; a < m; ++a) c[k] += (*this)(k, a) * values[a];
    return c;
  }

  /// Tensor-product version; values and result indexed [a + m*b].
  std::vector<double> apply2d(std::span<const double> values) const {
    const int m = size();
    std::vector<double> tmp(static_cast<std::size_t>(m) * m, 0.0), c(tmp.size(), 0.0);
    for (int b = 0; b < m; ++b)
      for (int k = 0; k < m; ++k)
        for (int a = 0; a < m; ++a) tmp[k + m * b] += (*this)(k, a) * values[a + m * b];
    for (int l = 0; l < m; ++l)
      for (int k = 0; k < m; ++k)
        for (int b = 0; b < m; ++b) c[k + m * l] += (*this)(l, b) * tmp[k + m * b];
    return c;
  }

 private:
  std::vector<double> points_;
  std::vector<double> matrix_;
};

/// Transform on {0, xi_0..xi_N, 1}.
inline ModalTransform extended_modal_transform(const BasisTables& t) {
  std::vector<double> pts;
  pts.push_back(0.0);
  pts.insert(pts.end(), t.nodes.begin(), t.nodes.end());
  pts.push_back(1.0);
  return ModalTransform(std::move(pts));
}

}  // namespace rhd
