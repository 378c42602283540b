#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "rhd/errors.hpp"

namespace rhd {

/// Conserved variables (D, m_1..m_Dim, E).
template <int Dim>
using State = std::array<double, Dim + 2>;

template <int Dim>
using Point = std::array<double, Dim>;

template <int Dim>
struct Primitive {
  double rho = 1.0;
  std::array<double, Dim> v{};
  double p = 1.0;
};

/// Ideal gas with constant adiabatic index.
struct Eos {
  double gamma = 5.0 / 3.0;

  Eos() = default;
  explicit Eos(double g) : gamma(g) {
    if (!(g > 1.0 && g <= 2.0))
      throw ConfigError("adiabatic index must lie in (1, 2], got " + std::to_string(g));
  }
  double kappa() const { return gamma / (gamma - 1.0); }
};

/// Upper bound applied to |v|^2 before forming the Lorentz factor.
inline constexpr double kMaxSpeedSquared = 1.0 - 1e-15;

template <std::size_t N>
inline std::array<double, N>& axpy(std::array<double, N>& y, double a, const std::array<double, N>& x) {
  for (std::size_t c = 0; c < N; ++c) y[c] += a * x[c];
  return y;
}

template <int Dim>
double speed_squared(const Primitive<Dim>& w) {
  double s = 0.0;
  for (double vi : w.v) s += vi * vi;
  return s;
}

template <int Dim>
State<Dim> prim_to_cons(const Primitive<Dim>& w, const Eos& eos) {
  const double v2 = speed_squared(w);
  if (!(w.rho > 0.0) || !(w.p > 0.0) || !(v2 < 1.0))
    throw InvalidPrimitive("primitive state requires rho > 0, p > 0, |v| < 1");
  const double lorentz = 1.0 / std::sqrt(1.0 - std::min(v2, kMaxSpeedSquared));
  const double rho_h = w.rho + eos.kappa() * w.p;
  const double a = rho_h * lorentz * lorentz;
  State<Dim> u{};
  u[0] = w.rho * lorentz;
  for (int i = 0; i < Dim; ++i) u[1 + i] = a * w.v[i];
  u[Dim + 1] = a - w.p;
  return u;
}

template <std::size_t N>
double momentum_squared(const std::array<double, N>& u) {
  constexpr int Dim = static_cast<int>(N) - 2;
  double s = 0.0;
  for (int i = 0; i < Dim; ++i) s += u[1 + i] * u[1 + i];
  return s;
}

/// q = E - sqrt(D^2 + |m|^2), concave in u.
template <std::size_t N>
double q_constraint(const std::array<double, N>& u) {
  return u[N - 1] - std::sqrt(u[0] * u[0] + momentum_squared(u));
}

struct Admissibility {
  double D;
  double q;
  bool admissible;
};

template <std::size_t N>
Admissibility admissibility(const std::array<double, N>& u) {
  const double q = q_constraint(u);
  return {u[0], q, u[0] > 0.0 && q > 0.0};
}

template <std::size_t N>
bool is_admissible(const std::array<double, N>& u) {
  return u[0] > 0.0 && q_constraint(u) > 0.0;
}

enum class Recovery { ok, not_admissible, no_convergence };

struct RecoveryOptions {
  double tolerance = 1e-12;
  int max_iterations = 200;
  double guess = 0.0;  ///< starting pressure; clamped into the bracket [0, E)
};

/// Pressure from the scalar residual D*W + kappa*p*W^2 - p - E with v = |m|/(E+p).
/// Newton with analytic derivative, bracketed by bisection on [0, E].
template <int Dim>
Recovery recover_primitive(const State<Dim>& u, const Eos& eos, Primitive<Dim>& out,
                           const RecoveryOptions& opt = {}) noexcept {
  const double D = u[0];
  const double E = u[Dim + 1];
  const double m2 = momentum_squared(u);
  if (!(D > 0.0) || !(E - std::sqrt(D * D + m2) > 0.0)) return Recovery::not_admissible;
  const double M = std::sqrt(m2);
  const double kappa = eos.kappa();

  auto residual = [&](double p, double& dr) {
    const double ep = E + p;
    const double v = M / ep;
    const double v2 = std::min(v * v, kMaxSpeedSquared);
    const double W = 1.0 / std::sqrt(1.0 - v2);
    const double dW = -W * W * W * v2 / ep;
    dr = D * dW + kappa * (W * W + 2.0 * p * W * dW) - 1.0;
    return D * W + kappa * p * W * W - p - E;
  };

  const double scale = std::max(1.0, E);
  double lo = 0.0, hi = E;
  double p = (opt.guess > 0.0 && opt.guess < E) ? opt.guess : 0.0;
  bool converged = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    double dr = 0.0;
    const double r = residual(p, dr);
    if (std::abs(r) <= 1e-15 * scale) {
      converged = true;
      break;
    }
    if (r < 0.0) lo = p; else hi = p;
    double next = (dr != 0.0) ? p - r / dr : 0.5 * (lo + hi);
    const bool newton = next > lo && next < hi;
    if (!newton) next = 0.5 * (lo + hi);
    const double step = std::abs(next - p);
    p = next;
    /// a Newton step this small leaves an error far below round-off
    if ((newton && step <= 1e-10 * p) || hi - lo <= 1e-16 * hi) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    double dr = 0.0;
    if (!(std::abs(residual(p, dr)) <= opt.tolerance * scale)) return Recovery::no_convergence;
  }
  if (!(p > 0.0)) return Recovery::no_convergence;

  const double ep = E + p;
  double v2 = 0.0;
  for (int i = 0; i < Dim; ++i) {
    out.v[i] = u[1 + i] / ep;
    v2 += out.v[i] * out.v[i];
  }
  v2 = std::min(v2, kMaxSpeedSquared);
  out.rho = D * std::sqrt(1.0 - v2);
  out.p = p;
  return Recovery::ok;
}

template <std::size_t N>
Primitive<static_cast<int>(N) - 2> cons_to_prim(const std::array<double, N>& u, const Eos& eos) {
  Primitive<static_cast<int>(N) - 2> w;
  switch (recover_primitive(u, eos, w)) {
    case Recovery::ok: return w;
    case Recovery::not_admissible: throw NotAdmissible("conserved state outside the admissible set");
    case Recovery::no_convergence: break;
  }
  throw NoConvergence("pressure recovery did not converge");
}

template <int Dim>
double lorentz_factor(const Primitive<Dim>& w) {
  return 1.0 / std::sqrt(1.0 - std::min(speed_squared(w), kMaxSpeedSquared));
}

/// Physical flux in direction dir given both representations of the same state.
template <int Dim>
State<Dim> flux(const State<Dim>& u, const Primitive<Dim>& w, int dir) {
  State<Dim> f;
  const double vd = w.v[dir];
  f[0] = u[0] * vd;
  for (int i = 0; i < Dim; ++i) f[1 + i] = u[1 + i] * vd;
  f[1 + dir] += w.p;
  f[Dim + 1] = u[1 + dir];
  return f;
}

template <std::size_t N>
std::array<double, N> flux(const std::array<double, N>& u, const Eos& eos, int dir) {
  return flux(u, cons_to_prim(u, eos), dir);
}

template <int Dim>
double sound_speed_squared(const Primitive<Dim>& w, const Eos& eos) {
  const double g = eos.gamma;
  return g * w.p * (g - 1.0) / (g * w.p + (g - 1.0) * w.rho);
}

template <int Dim>
double sound_speed(const Primitive<Dim>& w, const Eos& eos) {
  return std::sqrt(sound_speed_squared(w, eos));
}

/// Largest |eigenvalue| of the flux Jacobian in direction dir.
template <int Dim>
double max_wave_speed(const Primitive<Dim>& w, const Eos& eos, int dir) {
  const double s2 = sound_speed_squared(w, eos);
  const double v2 = std::min(speed_squared(w), kMaxSpeedSquared);
  const double vd = w.v[dir];
  const double denom = 1.0 - v2 * s2;
  const double arg = std::max(0.0, denom - (1.0 - s2) * vd * vd);
  const double inv_lorentz = std::sqrt(1.0 - v2);
  return (std::abs(vd) * (1.0 - s2) + std::sqrt(s2) * inv_lorentz * std::sqrt(arg)) / denom;
}

template <std::size_t N>
double max_wave_speed(const std::array<double, N>& u, const Eos& eos, int dir) {
  return max_wave_speed(cons_to_prim(u, eos), eos, dir);
}

/// Fluxes in every direction evaluated from a conserved state; false if not admissible.
/// Successive calls are warm-started from the last recovered pressure.
template <int Dim>
struct RhdFluxModel {
  Eos eos;
  mutable double last_pressure = 0.0;

  bool evaluate(const State<Dim>& u, std::array<State<Dim>, Dim>& f) const {
    Primitive<Dim> w;
    RecoveryOptions opt;
    opt.guess = last_pressure;
    if (recover_primitive(u, eos, w, opt) != Recovery::ok) return false;
    last_pressure = w.p;
    for (int d = 0; d < Dim; ++d) f[d] = flux(u, w, d);
    return true;
  }
};

}  // namespace rhd
