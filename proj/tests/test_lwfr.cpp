#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rhd/alw.hpp"
#include "rhd/lwfr.hpp"
#include "rhd/problems.hpp"
#include "rhd/solver.hpp"
#include "oracles.hpp"

using namespace rhd;

using oracle::LinearFlux;

TEST(Alw, LinearSeamMatchesTruncatedSeries1d) {
  for (int N = 1; N <= 4; ++N) EXPECT_LE(oracle::linear_seam_deviation<1>(N), 1e-13) << N;
}

TEST(Alw, LinearSeamMatchesTruncatedSeries2d) {
  for (int N = 1; N <= 4; ++N) EXPECT_LE(oracle::linear_seam_deviation<2>(N), 1e-13) << N;
}

TEST(Alw, DegreeOneStencilHandExpansion) {
  const BasisTables t = build_basis(1);
  ElementWorkspace<1> ws(1);
  ws.u = {State<1>{1.0, 2.0, 3.0}, State<1>{2.0, 1.0, 5.0}};
  LinearFlux<1> model{{0.5}};
  ASSERT_EQ(alw_time_average(ws, t, {0.1}, model), AlwStatus::ok);
  for (int k = 0; k < 2; ++k)
    for (int c = 0; c < 3; ++c)
      EXPECT_NEAR(ws.F[0][k][c], 0.5 * (ws.u[k][c] + 0.5 * ws.u_k[1][k][c]), 1e-15);
}

TEST(Alw, ConstantElementGivesPointwiseFlux) {
  const Eos eos(5.0 / 3.0);
  const RhdFluxModel<2> model{eos};
  const auto u = prim_to_cons(Primitive<2>{1.3, {0.4, -0.2}, 0.7}, eos);
  for (int N = 1; N <= 4; ++N) {
    const BasisTables t = build_basis(N);
    ElementWorkspace<2> ws(N);
    std::fill(ws.u.begin(), ws.u.end(), u);
    ASSERT_EQ(alw_time_average(ws, t, {0.05, 0.05}, model), AlwStatus::ok);
    FaceTraces<2> tr;
    ASSERT_EQ(alw_face_traces(ws, t, model, tr), AlwStatus::ok);
    for (int d = 0; d < 2; ++d) {
      const auto f = flux(u, eos, d);
      for (const auto& F : ws.F[d])
        for (int c = 0; c < 4; ++c) EXPECT_NEAR(F[c], f[c], 1e-13);
    }
    for (std::size_t k = 0; k < ws.U.size(); ++k)
      for (int c = 0; c < 4; ++c) EXPECT_NEAR(ws.U[k][c], u[c], 1e-13);
    for (int side = 0; side < 4; ++side) {
      const auto f = flux(u, eos, side / 2);
      for (int line = 0; line <= N; ++line)
        for (int c = 0; c < 4; ++c) EXPECT_NEAR(tr.flux[side * (N + 1) + line][c], f[c], 1e-13);
    }
  }
}

TEST(Alw, RestStateWithSpatialDensityGivesPressureTraces) {
  const Eos eos(5.0 / 3.0);
  const RhdFluxModel<1> model{eos};
  const BasisTables t = build_basis(3);
  ElementWorkspace<1> ws(3);
  for (int k = 0; k < 4; ++k) ws.u[k] = prim_to_cons(Primitive<1>{1.0 + t.nodes[k] * t.nodes[k], {0.0}, 2.0}, eos);
  ASSERT_EQ(alw_time_average(ws, t, {1e-9}, model), AlwStatus::ok);
  FaceTraces<1> tr;
  ASSERT_EQ(alw_face_traces(ws, t, model, tr), AlwStatus::ok);
  EXPECT_NEAR(tr.flux[0][1], 2.0, 1e-9);
  EXPECT_NEAR(tr.flux[1][1], 2.0, 1e-9);
}

TEST(Alw, WideStencilsAgreeWithNarrowOnLinearSeam) {
  /// N=4 first and second derivative stencils reduce to the narrower ones on polynomial data
  const TimeStencil s3 = time_stencil(3, 2), s4 = time_stencil(4, 2);
  auto apply = [](const TimeStencil& s, auto g) {
    double v = s.center * g(0.0);
    for (int k = 0; k < s.terms; ++k) v += s.weight[k] * g(static_cast<double>(s.shift[k]));
    return v;
  };
  auto quad = [](double k) { return 1.0 + 2.0 * k + 1.5 * k * k; };
  EXPECT_NEAR(apply(s3, quad), apply(s4, quad), 1e-14);
  EXPECT_NEAR(apply(time_stencil(2, 1), quad), apply(time_stencil(4, 1), quad), 1e-14);
}

TEST(Lwfr, RusanovExamples) {
  const State<1> F{1.0, 2.0, 3.0}, U{0.5, 0.1, 2.0};
  const auto same = rusanov_face_flux(F, F, U, U, 0.7);
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(same[c], F[c]);
  const State<1> zero{}, u0{1.0, -2.0, 4.0};
  State<1> ur;
  for (int c = 0; c < 3; ++c) ur[c] = 2.0 * u0[c];
  const auto diss = rusanov_face_flux(zero, zero, zero, ur, 1.0);
  for (int c = 0; c < 3; ++c) EXPECT_DOUBLE_EQ(diss[c], -u0[c]);
}

TEST(Lwfr, ComputeDtArithmetic) {
  const Mesh<2> mesh({10, 10}, {0.0, 0.0}, {1.0, 1.0});
  std::vector<std::array<double, 2>> lam(100, {0.5, 0.5});
  EXPECT_NEAR(compute_dt(lam, mesh, 0.1, 1.0), 0.01, 1e-15);
  const Mesh<1> m1({10}, {0.0}, {1.0}), m2({20}, {0.0}, {1.0});
  std::vector<std::array<double, 1>> l1(10, {0.5}), l2(20, {0.5});
  EXPECT_NEAR(compute_dt(l1, m1, 0.2, 0.5), 0.5 * 0.2 * 0.1 / 0.5, 1e-15);
  EXPECT_NEAR(compute_dt(l2, m2, 0.2, 0.5), 0.5 * compute_dt(l1, m1, 0.2, 0.5), 1e-15);
}

TEST(Lwfr, HighOrderUpdateMeanIdentity) {
  const BasisTables t = build_basis(3);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const int np = 16, nf = 4;
  std::vector<State<2>> u(np), Fx(np), Fy(np), faces(4 * nf), out(np);
  for (auto* v : {&u, &Fx, &Fy, &faces})
    for (auto& s : *v)
      for (auto& c : s) c = U(rng);
  const std::array<double, 2> ratio{0.03, 0.05};
  high_order_update<2>(u, {std::span<const State<2>>(Fx), std::span<const State<2>>(Fy)}, faces, t, ratio, out);
  const NodeLayout<2> lay{4};
  for (int c = 0; c < 4; ++c) {
    double before = 0.0, after = 0.0, jump = 0.0;
    for (int k = 0; k < np; ++k) {
      before += lay.weight(t, k) * u[k][c];
      after += lay.weight(t, k) * out[k][c];
    }
    for (int line = 0; line < nf; ++line) {
      jump += ratio[0] * t.weights[line] * (faces[1 * nf + line][c] - faces[0 * nf + line][c]);
      jump += ratio[1] * t.weights[line] * (faces[3 * nf + line][c] - faces[2 * nf + line][c]);
    }
    EXPECT_NEAR(after, before - jump, 1e-14);
  }
}

TEST(Lwfr, FreeStreamPreservation) {
  for (int N = 1; N <= 4; ++N)
    for (auto lim : {LimiterKind::none, LimiterKind::blend}) {
      EXPECT_LE(oracle::free_stream_defect(make_problem_1d("smooth_advection_1d"), lim, N), 1e-13) << N;
      EXPECT_LE(oracle::free_stream_defect(make_problem_2d("vortex_2d"), lim, N), 1e-13) << N;
      EXPECT_LE(oracle::free_stream_defect(make_problem_1d("rp1_1d"), lim, N), 1e-13) << N;
      EXPECT_LE(oracle::free_stream_defect(make_problem_2d("rp1_2d"), lim, N), 1e-13) << N;
    }
}

TEST(Lwfr, SmoothAdvectionOrderAtDegreeThree) {
  const auto spec = make_problem_1d("smooth_advection_1d");
  RunConfig cfg;
  cfg.degree = 3;
  cfg.limiter = LimiterKind::none;
  cfg.t_final = 0.5;
  double prev = 0.0;
  for (int n : {8, 16}) {
    cfg.cells = {n};
    Solver<1> s(spec, cfg);
    s.run();
    double err = 0.0;
    for (int e = 0; e < s.mesh().num_elements(); ++e)
      for (int k = 0; k < 4; ++k) {
        const auto x = s.field().position(e, k, s.tables());
        err += s.tables().weights[k] * s.mesh().step(0) *
               std::abs(cons_to_prim(s.field().at(e, k), s.eos()).rho - spec.exact(x, 0.5).rho);
      }
    if (prev > 0.0) {
      EXPECT_GT(std::log2(prev / err), 3.5);
    }
    prev = err;
  }
}
