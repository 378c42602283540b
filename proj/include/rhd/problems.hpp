#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/boundary.hpp"
#include "rhd/errors.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

template <int Dim>
struct ProblemSpec {
  std::string id;
  std::array<double, Dim> lower{};
  std::array<double, Dim> upper{};
  double gamma = 5.0 / 3.0;
  double t_final = 0.0;
  std::function<Primitive<Dim>(const Point<Dim>&)> initial;
  std::function<Primitive<Dim>(const Point<Dim>&, double)> exact;  ///< empty if unknown
  BoundarySpec<Dim> boundary;
  double safety = 0.95;
  double alpha_max = 1.0;
  std::array<int, Dim> default_cells{};
  int default_degree = 3;

  Eos eos() const { return Eos(gamma); }
  bool has_exact() const { return static_cast<bool>(exact); }
};

namespace detail {

inline Primitive<1> prim1(double rho, double v, double p) {
  Primitive<1> w;
  w.rho = rho;
  w.v = {v};
  w.p = p;
  return w;
}

inline Primitive<2> prim2(double rho, double v1, double v2, double p) {
  Primitive<2> w;
  w.rho = rho;
  w.v = {v1, v2};
  w.p = p;
  return w;
}

inline ProblemSpec<1> riemann_1d(const std::string& id, Primitive<1> left, Primitive<1> right, double t_final) {
  ProblemSpec<1> s;
  s.id = id;
  s.lower = {0.0};
  s.upper = {1.0};
  s.t_final = t_final;
  s.initial = [=](const Point<1>& x) { return x[0] < 0.5 ? left : right; };
  s.boundary = BoundarySpec<1>::all(BoundaryKind::outflow);
  s.default_cells = {200};
  return s;
}

/// Quadrant data ordered NE, NW, SW, SE about (0.5, 0.5).
inline ProblemSpec<2> riemann_2d(const std::string& id, const std::array<Primitive<2>, 4>& q) {
  ProblemSpec<2> s;
  s.id = id;
  s.lower = {0.0, 0.0};
  s.upper = {1.0, 1.0};
  s.t_final = 0.4;
  s.initial = [=](const Point<2>& x) {
    const bool east = x[0] > 0.5, north = x[1] > 0.5;
    if (north) return east ? q[0] : q[1];
    return east ? q[3] : q[2];
  };
  s.boundary = BoundarySpec<2>::all(BoundaryKind::outflow);
  s.default_cells = {100, 100};
  return s;
}

inline ProblemSpec<1> smooth_advection() {
  ProblemSpec<1> s;
  s.id = "smooth_advection_1d";
  s.lower = {0.0};
  s.upper = {1.0};
  s.t_final = 2.0;
  s.exact = [](const Point<1>& x, double t) {
    return prim1(2.0 + std::sin(2.0 * std::numbers::pi * (x[0] - 0.5 * t)), 0.5, 1.0);
  };
  s.initial = [ex = s.exact](const Point<1>& x) { return ex(x, 0.0); };
  s.boundary = BoundarySpec<1>::all(BoundaryKind::periodic);
  s.default_cells = {32};
  return s;
}

/// Simple wave carrying a compact density bump; the Riemann invariant of the left-moving family is uniform.
inline ProblemSpec<1> isentropic_pulse() {
  ProblemSpec<1> s;
  s.id = "isentropic_pulse_1d";
  s.lower = {-0.35};
  s.upper = {1.0};
  s.t_final = 0.8;
  const double g = s.gamma;
  const double rho_ref = 1.0, p_ref = 100.0, amp = 1.0, width = 0.3;
  const double K = p_ref / std::pow(rho_ref, g);
  const double sg = std::sqrt(g - 1.0);
  auto invariant_part = [=](double rho) {
    const double p = K * std::pow(rho, g);
    const double cs = std::sqrt(g * p * (g - 1.0) / (g * p + (g - 1.0) * rho));
    return std::log((sg + cs) / (sg - cs)) / sg;
  };
  const double J = -invariant_part(rho_ref);
  s.initial = [=](const Point<1>& x) {
    double f = 0.0;
    if (std::abs(x[0]) < width) f = std::pow((x[0] / width) * (x[0] / width) - 1.0, 4);
    const double rho = rho_ref * (1.0 + amp * f);
    /// 0.5 ln((1+v)/(1-v)) = J + invariant_part(rho)
    const double v = std::tanh(J + invariant_part(rho));
    return prim1(rho, v, K * std::pow(rho, g));
  };
  s.boundary = BoundarySpec<1>::all(BoundaryKind::outflow);
  s.default_cells = {100};
  return s;
}

inline ProblemSpec<1> density_perturbation() {
  ProblemSpec<1> s;
  s.id = "density_perturbation_1d";
  s.lower = {0.0};
  s.upper = {1.0};
  s.t_final = 0.35;
  s.initial = [](const Point<1>& x) {
    if (x[0] < 0.5) return prim1(5.0, 0.0, 50.0);
    return prim1(2.0 + 0.3 * std::sin(50.0 * x[0]), 0.0, 5.0);
  };
  s.boundary = BoundarySpec<1>::all(BoundaryKind::outflow);
  s.default_cells = {200};
  return s;
}

inline ProblemSpec<1> blast() {
  ProblemSpec<1> s;
  s.id = "blast_1d";
  s.lower = {0.0};
  s.upper = {1.0};
  s.gamma = 1.43;
  s.t_final = 0.43;
  s.safety = 0.75;
  s.initial = [](const Point<1>& x) {
    if (x[0] < 0.1) return prim1(1.0, 0.0, 1000.0);
    if (x[0] < 0.9) return prim1(1.0, 0.0, 0.01);
    return prim1(1.0, 0.0, 100.0);
  };
  s.boundary = BoundarySpec<1>::all(BoundaryKind::outflow);
  s.default_cells = {2000};
  s.default_degree = 4;
  return s;
}

/// Boosted isentropic vortex; it moves with velocity (-w/sqrt2, -w/sqrt2).
inline ProblemSpec<2> vortex() {
  ProblemSpec<2> s;
  s.id = "vortex_2d";
  s.lower = {-20.0, -20.0};
  s.upper = {20.0, 20.0};
  s.t_final = 80.0;
  const double g = s.gamma;
  const double eps = 5.0;
  const double w = 0.5 * std::sqrt(2.0);
  const double a = (g - 1.0) / g * eps * eps / (8.0 * std::numbers::pi * std::numbers::pi);
  const double phi = 1.0 / std::sqrt(1.0 - w * w);
  const double drift = w / std::sqrt(2.0);
  auto at_rest = [=](double x, double y) {
    const double x0 = x + 0.5 * (phi - 1.0) * (x + y);
    const double y0 = y + 0.5 * (phi - 1.0) * (x + y);
    const double r2 = x0 * x0 + y0 * y0;
    const double ex = a * std::exp(1.0 - r2);
    const double rho = std::pow(1.0 - ex, 1.0 / (g - 1.0));
    const double b = 2.0 * g * ex / (2.0 * g - 1.0 - g * ex);
    const double fac = std::sqrt(b / (1.0 + b * r2));
    const double u1 = -y0 * fac, u2 = x0 * fac;
    const double sum = u1 + u2;
    const double den = 1.0 - w * sum / std::sqrt(2.0);
    const double boost = phi * w * w / (2.0 * (phi + 1.0)) * sum;
    const double v1 = (u1 / phi - drift + boost) / den;
    const double v2 = (u2 / phi - drift + boost) / den;
    return prim2(rho, v1, v2, std::pow(rho, g));
  };
  const double L = 40.0;
  s.exact = [=](const Point<2>& x, double t) {
    auto wrap = [&](double z) { return z - L * std::floor((z + 20.0) / L); };
    return at_rest(wrap(x[0] + drift * t), wrap(x[1] + drift * t));
  };
  s.initial = [=](const Point<2>& x) { return at_rest(x[0], x[1]); };
  s.boundary = BoundarySpec<2>::all(BoundaryKind::periodic);
  s.default_cells = {40, 40};
  return s;
}

/// Light jet injected through |x| < 0.5 at y = 0; ambient pressure equals the inlet pressure fixed by the Mach number.
inline ProblemSpec<2> jet(const std::string& id, double speed, double mach, double t_final) {
  ProblemSpec<2> s;
  s.id = id;
  s.lower = {-12.0, 0.0};
  s.upper = {12.0, 25.0};
  s.t_final = t_final;
  const double g = s.gamma;
  const double rho_jet = 0.1;
  const double cs = speed / mach;
  /// solve cs^2 = g p (g-1) / (g p + (g-1) rho) for p
  const double p = cs * cs * (g - 1.0) * rho_jet / (g * (g - 1.0 - cs * cs));
  s.initial = [=](const Point<2>&) { return prim2(1.0, 0.0, 0.0, p); };
  s.boundary = BoundarySpec<2>::all(BoundaryKind::outflow);
  s.boundary.kind[2] = BoundaryKind::inflow;
  s.boundary.inflow[2] = [=](const Point<2>& x, double) -> std::optional<Primitive<2>> {
    if (std::abs(x[0]) < 0.5) return prim2(rho_jet, 0.0, speed, p);
    return std::nullopt;
  };
  s.default_cells = {120, 125};
  s.default_degree = 4;
  return s;
}

inline ProblemSpec<2> shock_bubble(const std::string& id, double bubble_rho, double t_final) {
  ProblemSpec<2> s;
  s.id = id;
  s.lower = {0.0, -45.0};
  s.upper = {325.0, 45.0};
  s.t_final = t_final;
  const Primitive<2> pre = prim2(1.0, 0.0, 0.0, 0.05);
  const Primitive<2> post = prim2(1.865225080631180, -0.196781107378299, 0.0, 1.5);
  const Primitive<2> bubble = prim2(bubble_rho, 0.0, 0.0, 0.05);
  s.initial = [=](const Point<2>& x) {
    if (x[0] > 265.0) return post;
    const double dx = x[0] - 215.0, dy = x[1];
    if (dx * dx + dy * dy < 25.0 * 25.0) return bubble;
    return pre;
  };
  s.boundary.kind = {BoundaryKind::inflow, BoundaryKind::inflow, BoundaryKind::reflective, BoundaryKind::reflective};
  s.boundary.inflow[0] = [=](const Point<2>&, double) -> std::optional<Primitive<2>> { return pre; };
  s.boundary.inflow[1] = [=](const Point<2>&, double) -> std::optional<Primitive<2>> { return post; };
  s.default_cells = {325, 90};
  s.default_degree = 4;
  return s;
}

inline ProblemSpec<2> kelvin_helmholtz() {
  ProblemSpec<2> s;
  s.id = "kh_2d";
  s.lower = {-0.5, -1.0};
  s.upper = {0.5, 1.0};
  s.t_final = 3.0;
  s.alpha_max = 0.25;
  const double a = 0.01, vs = 0.5, eta0 = 0.1, sigma = 0.1;
  s.initial = [=](const Point<2>& x) {
    const double y = x[1];
    const double sgn = y > 0.0 ? 1.0 : -1.0;
    const double yc = y > 0.0 ? y - 0.5 : y + 0.5;
    const double th = std::tanh(yc / a);
    const double rho = 0.505 + sgn * 0.495 * th;
    const double v1 = sgn * vs * th;
    const double v2 = sgn * eta0 * vs * std::sin(2.0 * std::numbers::pi * x[0]) * std::exp(-yc * yc / sigma);
    return prim2(rho, v1, v2, 1.0);
  };
  s.boundary = BoundarySpec<2>::all(BoundaryKind::periodic);
  s.default_cells = {80, 160};
  s.default_degree = 4;
  return s;
}

}  // namespace detail

inline const std::vector<std::string>& problem_ids() {
  static const std::vector<std::string> ids = {
      "smooth_advection_1d", "isentropic_pulse_1d", "rp1_1d", "rp2_1d", "rp3_1d", "rp4_1d",
      "density_perturbation_1d", "blast_1d", "vortex_2d", "rp1_2d", "rp2_2d", "rp3_2d", "rp4_2d", "rp5_2d",
      "jet_2d", "jet_2d_b", "jet_2d_c", "shock_bubble_2d", "shock_bubble_2d_heavy", "kh_2d"};
  return ids;
}

/// 1 or 2; throws UnknownProblem.
inline int problem_dimension(const std::string& id) {
  for (const auto& p : problem_ids())
    if (p == id) return id.find("_2d") != std::string::npos ? 2 : 1;
  throw UnknownProblem("unknown problem id '" + id + "'");
}

inline ProblemSpec<1> make_problem_1d(const std::string& id) {
  using detail::prim1;
  if (id == "smooth_advection_1d") return detail::smooth_advection();
  if (id == "isentropic_pulse_1d") return detail::isentropic_pulse();
  if (id == "rp1_1d") return detail::riemann_1d(id, prim1(1.0, -0.6, 10.0), prim1(10.0, 0.5, 20.0), 0.4);
  if (id == "rp2_1d") return detail::riemann_1d(id, prim1(1.0, 0.0, 1e3), prim1(1.0, 0.0, 1e-2), 0.4);
  if (id == "rp3_1d") {
    auto s = detail::riemann_1d(id, prim1(10.0, 0.0, 40.0 / 3.0), prim1(1.0, 0.0, 1e-6), 0.4);
    s.safety = 0.75;
    return s;
  }
  if (id == "rp4_1d") return detail::riemann_1d(id, prim1(1.0, 0.9, 1.0), prim1(1.0, 0.0, 10.0), 0.4);
  if (id == "density_perturbation_1d") return detail::density_perturbation();
  if (id == "blast_1d") return detail::blast();
  throw UnknownProblem("unknown 1D problem id '" + id + "'");
}

inline ProblemSpec<2> make_problem_2d(const std::string& id) {
  using detail::prim2;
  if (id == "vortex_2d") return detail::vortex();
  if (id == "rp1_2d")
    return detail::riemann_2d(id, {prim2(0.1, 0.0, 0.0, 0.01), prim2(0.1, 0.99, 0.0, 1.0), prim2(0.5, 0.0, 0.0, 1.0),
                                   prim2(0.1, 0.0, 0.99, 1.0)});
  if (id == "rp2_2d")
    return detail::riemann_2d(id, {prim2(0.5, 0.5, -0.5, 5.0), prim2(1.0, 0.5, 0.5, 5.0), prim2(3.0, -0.5, 0.5, 5.0),
                                   prim2(1.5, -0.5, -0.5, 5.0)});
  if (id == "rp3_2d")
    return detail::riemann_2d(id, {prim2(1.0, 0.0, 0.0, 1.0), prim2(0.5771, -0.3529, 0.0, 0.4),
                                   prim2(1.0, -0.3529, -0.3529, 1.0), prim2(0.5771, 0.0, -0.3529, 0.4)});
  if (id == "rp4_2d")
    return detail::riemann_2d(id, {prim2(0.035145216124503, 0.0, 0.0, 0.162931056509027), prim2(0.1, 0.7, 0.0, 1.0),
                                   prim2(0.5, 0.0, 0.0, 1.0), prim2(0.1, 0.0, 0.7, 1.0)});
  if (id == "rp5_2d")
    return detail::riemann_2d(id, {prim2(0.1, 0.0, 0.0, 20.0), prim2(0.00414329639576, 0.9946418833556542, 0.0, 0.05),
                                   prim2(0.01, 0.0, 0.0, 0.05), prim2(0.00414329639576, 0.0, 0.9946418833556542, 0.05)});
  if (id == "jet_2d") return detail::jet(id, 0.99, 50.0, 30.0);
  if (id == "jet_2d_b") return detail::jet(id, 0.999, 50.0, 25.0);
  if (id == "jet_2d_c") return detail::jet(id, 0.9999, 500.0, 23.0);
  if (id == "shock_bubble_2d") return detail::shock_bubble(id, 0.1358, 450.0);
  if (id == "shock_bubble_2d_heavy") return detail::shock_bubble(id, 3.1538, 500.0);
  if (id == "kh_2d") return detail::kelvin_helmholtz();
  throw UnknownProblem("unknown 2D problem id '" + id + "'");
}

/// Pointwise evaluation of the initial data at every solution point.
template <int Dim>
SolutionField<Dim> sample_initial(const ProblemSpec<Dim>& spec, const Mesh<Dim>& mesh, const BasisTables& t) {
  SolutionField<Dim> field(mesh, t.degree);
  const Eos eos = spec.eos();
  for (int e = 0; e < mesh.num_elements(); ++e)
    for (int k = 0; k < field.nodes_per_element(); ++k) {
      const Point<Dim> x = field.position(e, k, t);
      try {
        field.at(e, k) = prim_to_cons(spec.initial(x), eos);
      } catch (const InvalidPrimitive& err) {
        std::string where = "x=" + std::to_string(x[0]);
        if constexpr (Dim == 2) where += ", y=" + std::to_string(x[1]);
        throw InvalidPrimitive(std::string(err.what()) + " at " + where);
      }
    }
  return field;
}

}  // namespace rhd
