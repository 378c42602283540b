#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "rhd/basis.hpp"

using namespace rhd;

namespace {

/// Independent root finder for P_n on [-1, 1]: sign-change scan plus bisection.
std::vector<double> legendre_roots_bisection(int n) {
  auto P = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return n == 0 ? 1.0 : p1;
  };
  std::vector<double> roots;
  const int samples = 20000;
  for (int i = 0; i < samples; ++i) {
    double a = -1.0 + 2.0 * i / samples, b = -1.0 + 2.0 * (i + 1) / samples;
    if (P(a) == 0.0 || P(a) * P(b) > 0.0) continue;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (P(a) * P(m) <= 0.0) b = m; else a = m;
    }
    roots.push_back(0.5 * (a + b));
  }
  return roots;
}

std::vector<double> sample(const std::vector<double>& x, auto f) {
  std::vector<double> v;
  for (double xi : x) v.push_back(f(xi));
  return v;
}

}  // namespace

TEST(Basis, DegreeOneNodesAndWeights) {
  const auto t = build_basis(1);
  EXPECT_NEAR(t.nodes[0], 0.5 - 0.5 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(t.nodes[1], 0.5 + 0.5 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(t.weights[0], 0.5, 1e-15);
  EXPECT_NEAR(t.weights[1], 0.5, 1e-15);
}

TEST(Basis, NodesMatchIndependentRootFinder) {
  for (int N = 1; N <= 4; ++N) {
    const auto t = build_basis(N);
    const auto roots = legendre_roots_bisection(N + 1);
    ASSERT_EQ(roots.size(), static_cast<std::size_t>(N + 1));
    for (int i = 0; i <= N; ++i) EXPECT_NEAR(t.nodes[i], 0.5 * (roots[i] + 1.0), 1e-14);
  }
}

TEST(Basis, QuadratureExactnessBoundary) {
  for (int N = 1; N <= 4; ++N) {
    const auto t = build_basis(N);
    for (int k = 0; k <= 2 * N + 1; ++k) {
      const auto v = sample(t.nodes, [k](double x) { return std::pow(x, k); });
      EXPECT_NEAR(gauss_quadrature(v, t.weights), 1.0 / (k + 1), 1e-14) << "N=" << N << " k=" << k;
    }
    const int k = 2 * N + 2;
    const auto v = sample(t.nodes, [k](double x) { return std::pow(x, k); });
    EXPECT_GT(std::abs(gauss_quadrature(v, t.weights) - 1.0 / (k + 1)), 1e-6);
  }
  const auto t1 = build_basis(1);
  EXPECT_NEAR(gauss_quadrature(sample(t1.nodes, [](double x) { return x * x * x; }), t1.weights), 0.25, 1e-15);
}

TEST(Basis, DifferentiationExactOnMonomials) {
  for (int N = 1; N <= 4; ++N) {
    const auto t = build_basis(N);
    const int n = N + 1;
    for (int k = 0; k <= N; ++k)
      for (int i = 0; i < n; ++i) {
        double d = 0.0;
        for (int j = 0; j < n; ++j) d += t.d(i, j) * std::pow(t.nodes[j], k);
        const double exact = k == 0 ? 0.0 : k * std::pow(t.nodes[i], k - 1);
        EXPECT_NEAR(d, exact, 1e-12);
      }
  }
}

TEST(Basis, ExtrapolationToFaces) {
  for (int N = 1; N <= 4; ++N) {
    const auto t = build_basis(N);
    const std::vector<double> c(N + 1, 3.5);
    EXPECT_NEAR(extrapolate_to_face<double>(c, 0, t), 3.5, 1e-14);
    EXPECT_NEAR(extrapolate_to_face<double>(c, 1, t), 3.5, 1e-14);
    const auto lin = sample(t.nodes, [](double x) { return x; });
    EXPECT_NEAR(extrapolate_to_face<double>(lin, 0, t), 0.0, 1e-14);
    EXPECT_NEAR(extrapolate_to_face<double>(lin, 1, t), 1.0, 1e-14);
  }
  const auto t = build_basis(2);
  const auto sq = sample(t.nodes, [](double x) { return x * x; });
  EXPECT_NEAR(extrapolate_to_face<double>(sq, 0, t), 0.0, 1e-14);
  EXPECT_NEAR(extrapolate_to_face<double>(sq, 1, t), 1.0, 1e-14);
}

TEST(Basis, RadauCorrectionDerivatives) {
  for (int N = 1; N <= 4; ++N) {
    const auto t = build_basis(N);
    double sl = 0.0, sr = 0.0;
    for (int i = 0; i <= N; ++i) {
      sl += t.weights[i] * t.radau_left[i];
      sr += t.weights[i] * t.radau_right[i];
    }
    EXPECT_NEAR(sl, -1.0, 1e-13);
    EXPECT_NEAR(sr, 1.0, 1e-13);
    /// c_R(xi) = (P_N + P_{N+1})(2 xi - 1) / 2 differentiated with respect to xi
    for (int i = 0; i <= N; ++i) {
      const double x = 2.0 * t.nodes[i] - 1.0;
      const double h = 1e-6;
      auto cR = [&](double z) { return 0.5 * (legendre(N, z).value + legendre(N + 1, z).value); };
      const double fd = (cR(x + h) - cR(x - h)) / (2.0 * h) * 2.0;
      EXPECT_NEAR(t.radau_right[i], fd, 1e-6);
      /// c_L mirrors c_R: c_L(xi) = c_R(1 - xi)
      const double xm = 1.0 - 2.0 * t.nodes[i];
      const double fdl = -(cR(xm + h) - cR(xm - h)) / (2.0 * h) * 2.0;
      EXPECT_NEAR(t.radau_left[i], fdl, 1e-6);
    }
  }
}

TEST(Basis, RadauEndpointValues) {
  for (int N = 1; N <= 4; ++N) {
    const double cR1 = 0.5 * (legendre(N, 1.0).value + legendre(N + 1, 1.0).value);
    const double cRm1 = 0.5 * (legendre(N, -1.0).value + legendre(N + 1, -1.0).value);
    EXPECT_NEAR(cR1, 1.0, 1e-15);
    EXPECT_NEAR(cRm1, 0.0, 1e-15);
  }
}

TEST(Basis, ModalTransformRecoversLegendreModes) {
  const auto t = build_basis(3);
  const auto T = extended_modal_transform(t);
  const int m = T.size();
  ASSERT_EQ(m, 6);
  for (int k = 0; k < m; ++k) {
    const auto v = sample(T.points(), [k](double x) { return legendre(k, 2.0 * x - 1.0).value; });
    const auto c = T.apply(v);
    for (int j = 0; j < m; ++j) EXPECT_NEAR(c[j], j == k ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Basis, ModalTransform2dSeparable) {
  const auto t = build_basis(2);
  const auto T = extended_modal_transform(t);
  const int m = T.size();
  const auto& p = T.points();
  std::vector<double> v(m * m);
  for (int b = 0; b < m; ++b)
    for (int a = 0; a < m; ++a) v[a + m * b] = legendre(1, 2 * p[a] - 1).value * legendre(3, 2 * p[b] - 1).value;
  const auto c = T.apply2d(v);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k) EXPECT_NEAR(c[k + m * l], (k == 1 && l == 3) ? 1.0 : 0.0, 1e-12);
}

TEST(Basis, RejectsUnsupportedDegree) {
  EXPECT_THROW(build_basis(0), UnsupportedDegree);
  EXPECT_THROW(build_basis(5), UnsupportedDegree);
}
