#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rhd/physics.hpp"

using namespace rhd;

namespace {

/// Independent recovery oracle: bisection on f(p) = p - (gamma-1) * (rho_h - rho) / kappa-free form.
/// For given p, v = m/(E+p), W = 1/sqrt(1-v^2), rho = D/W, eps-form pressure p' = (gamma-1)(E+p - D W)/(gamma W^2)... solved by bisection.
double oracle_pressure(double D, double m, double E, double gamma) {
  auto g = [&](double p) {
    const double v = m / (E + p);
    const double W = 1.0 / std::sqrt(1.0 - v * v);
    /// rho h W^2 = E + p, h = 1 + gamma/(gamma-1) p/rho, rho = D/W
    const double rho = D / W;
    const double rho_h = (E + p) / (W * W);
    return (gamma - 1.0) / gamma * (rho_h - rho) - p;
  };
  double lo = 1e-300, hi = E;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Physics, EosRejectsBadGamma) {
  EXPECT_THROW(Eos(1.0), ConfigError);
  EXPECT_THROW(Eos(2.5), ConfigError);
  EXPECT_NO_THROW(Eos(2.0));
  EXPECT_DOUBLE_EQ(Eos(5.0 / 3.0).kappa(), 2.5);
}

TEST(Physics, PrimToConsHandValues) {
  const Eos eos(5.0 / 3.0);
  Primitive<1> w{1.0, {0.6}, 1.0};
  const auto u = prim_to_cons(w, eos);
  const double W = 1.25, rho_h = 1.0 + 2.5;
  EXPECT_NEAR(u[0], W, 1e-15);
  EXPECT_NEAR(u[1], rho_h * W * W * 0.6, 1e-14);
  EXPECT_NEAR(u[2], rho_h * W * W - 1.0, 1e-14);
}

TEST(Physics, PrimToConsRejectsInvalid) {
  const Eos eos(1.4);
  EXPECT_THROW(prim_to_cons(Primitive<1>{-1.0, {0.0}, 1.0}, eos), InvalidPrimitive);
  EXPECT_THROW(prim_to_cons(Primitive<1>{1.0, {0.0}, 0.0}, eos), InvalidPrimitive);
  EXPECT_THROW(prim_to_cons(Primitive<2>{1.0, {0.8, 0.7}, 1.0}, eos), InvalidPrimitive);
}

TEST(Physics, RecoveryMatchesBisectionOracle) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lr(-4.0, 4.0), vel(-0.999, 0.999), gam(1.1, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const Eos eos(gam(rng));
    Primitive<1> w{std::pow(10.0, lr(rng)), {vel(rng)}, std::pow(10.0, lr(rng))};
    const auto u = prim_to_cons(w, eos);
    const auto r = cons_to_prim(u, eos);
    const double po = oracle_pressure(u[0], std::abs(u[1]), u[2], eos.gamma);
    EXPECT_NEAR(r.p, po, 1e-9 * po + 1e-13 * u[2]);
    EXPECT_NEAR(r.p, w.p, 1e-8 * w.p + 1e-12 * u[2]);
    EXPECT_NEAR(r.rho, w.rho, 1e-8 * w.rho + 1e-12 * u[0]);
    EXPECT_NEAR(r.v[0], w.v[0], 1e-8);
  }
}

TEST(Physics, RoundTrip2dExtreme) {
  const Eos eos(4.0 / 3.0);
  const Primitive<2> w{1e-3, {0.99, 0.1}, 1e-6};
  const auto r = cons_to_prim(prim_to_cons(w, eos), eos);
  EXPECT_NEAR(r.rho / w.rho, 1.0, 1e-8);
  EXPECT_NEAR(r.p / w.p, 1.0, 1e-6);
  EXPECT_NEAR(r.v[0], 0.99, 1e-10);
  EXPECT_NEAR(r.v[1], 0.1, 1e-10);
}

TEST(Physics, RecoveryRejectsInadmissible) {
  const Eos eos(5.0 / 3.0);
  Primitive<1> w;
  EXPECT_EQ(recover_primitive(State<1>{-1.0, 0.0, 3.0}, eos, w), Recovery::not_admissible);
  EXPECT_EQ(recover_primitive(State<1>{1.0, 2.0, 2.0}, eos, w), Recovery::not_admissible);
  EXPECT_THROW(cons_to_prim(State<1>{1.0, 0.0, 0.5}, eos), NotAdmissible);
}

TEST(Physics, AdmissibilityConstraint) {
  const State<2> u{1.0, 0.3, 0.4, 2.0};
  EXPECT_NEAR(q_constraint(u), 2.0 - std::sqrt(1.25), 1e-15);
  EXPECT_TRUE(is_admissible(u));
  EXPECT_FALSE(is_admissible(State<2>{1.0, 0.3, 0.4, 1.0}));
}

TEST(Physics, FluxAgainstPrimitiveFormula) {
  const Eos eos(5.0 / 3.0);
  const Primitive<2> w{2.0, {0.3, -0.5}, 4.0};
  const auto u = prim_to_cons(w, eos);
  const double W = 1.0 / std::sqrt(1.0 - 0.34);
  const double rhw2 = (2.0 + 2.5 * 4.0) * W * W;
  const auto fy = flux(u, eos, 1);
  EXPECT_NEAR(fy[0], 2.0 * W * -0.5, 1e-13);
  EXPECT_NEAR(fy[1], rhw2 * 0.3 * -0.5, 1e-13);
  EXPECT_NEAR(fy[2], rhw2 * 0.25 + 4.0, 1e-13);
  EXPECT_NEAR(fy[3], rhw2 * -0.5, 1e-13);
}

TEST(Physics, SoundSpeedAndWaveSpeed) {
  const Eos eos(4.0 / 3.0);
  const Primitive<1> rest{1.0, {0.0}, 1.0};
  /// cs^2 = gamma p / (rho h), h = 1 + 4 p / rho
  const double cs2 = (4.0 / 3.0) / 5.0;
  EXPECT_NEAR(sound_speed_squared(rest, eos), cs2, 1e-15);
  EXPECT_NEAR(max_wave_speed(rest, eos, 0), std::sqrt(cs2), 1e-15);
  /// 1D: relativistic velocity addition (v + c)/(1 + v c)
  const Primitive<1> moving{1.0, {0.5}, 1.0};
  const double c = std::sqrt(cs2);
  EXPECT_NEAR(max_wave_speed(moving, eos, 0), (0.5 + c) / (1.0 + 0.5 * c), 1e-14);
  const Primitive<2> w{1.0, {0.9, 0.4}, 0.01};
  const double lam = max_wave_speed(w, eos, 1);
  EXPECT_GT(lam, 0.4);
  EXPECT_LT(lam, 1.0);
}

TEST(Physics, FluxModelFlagsInadmissible) {
  const RhdFluxModel<1> model{Eos(5.0 / 3.0)};
  std::array<State<1>, 1> f;
  EXPECT_FALSE(model.evaluate(State<1>{1.0, 5.0, 2.0}, f));
  EXPECT_TRUE(model.evaluate(prim_to_cons(Primitive<1>{1.0, {0.2}, 1.0}, model.eos), f));
}
