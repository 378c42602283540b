#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "rhd/basis.hpp"
#include "rhd/errors.hpp"
#include "rhd/mesh.hpp"
#include "rhd/physics.hpp"

namespace rhd {

enum class BoundaryKind { outflow, inflow, periodic, reflective };

inline std::string to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::outflow: return "outflow";
    case BoundaryKind::inflow: return "inflow";
    case BoundaryKind::periodic: return "periodic";
    case BoundaryKind::reflective: return "reflective";
  }
  return "?";
}

/// Prescribed state on an inflow side; nullopt means the point behaves as outflow.
template <int Dim>
using InflowFunction = std::function<std::optional<Primitive<Dim>>(const Point<Dim>&, double)>;

/// Sides ordered (x-, x+, y-, y+).
template <int Dim>
struct BoundarySpec {
  std::array<BoundaryKind, 2 * Dim> kind{};
  std::array<InflowFunction<Dim>, 2 * Dim> inflow{};

  static BoundarySpec all(BoundaryKind k) {
    BoundarySpec b;
    b.kind.fill(k);
    return b;
  }

  bool periodic(int d) const { return kind[2 * d] == BoundaryKind::periodic; }
  std::array<bool, Dim> periodic_mask() const {
    std::array<bool, Dim> m{};
    for (int d = 0; d < Dim; ++d) m[d] = periodic(d);
    return m;
  }

  void validate() const {
    for (int d = 0; d < Dim; ++d) {
      const bool lo = kind[2 * d] == BoundaryKind::periodic;
      const bool hi = kind[2 * d + 1] == BoundaryKind::periodic;
      if (lo != hi) throw MismatchedPeriodicity("periodic boundary must be paired on opposite sides");
      for (int s = 0; s < 2; ++s)
        if (kind[2 * d + s] == BoundaryKind::inflow && !inflow[2 * d + s])
          throw ConfigError("inflow side without a prescribed state");
    }
  }
};

/// Neighbour of element e across side s in direction d, wrapping periodic directions; -1 at a physical boundary.
template <int Dim>
int neighbor_element(const Mesh<Dim>& mesh, const BoundarySpec<Dim>& bc, int e, int d, int s) {
  auto c = mesh.coords(e);
  c[d] += (s == 0) ? -1 : 1;
  if (c[d] < 0 || c[d] >= mesh.cells[d]) {
    if (!bc.periodic(d)) return -1;
    c[d] = (c[d] + mesh.cells[d]) % mesh.cells[d];
  }
  return mesh.index(c);
}

/// Mirror image of a state across a wall normal to dir.
template <std::size_t N, int Dim = static_cast<int>(N) - 2>
State<Dim> reflect_state(std::array<double, N> u, int dir) {
  u[1 + dir] = -u[1 + dir];
  return u;
}

/// Normal flux of the mirrored state, expressed through the original flux.
template <std::size_t N, int Dim = static_cast<int>(N) - 2>
State<Dim> reflect_flux(std::array<double, N> f, int dir) {
  for (int c = 0; c < Dim + 2; ++c)
    if (c != 1 + dir) f[c] = -f[c];
  return f;
}

/// Outflow: the interior trace is used unchanged.
template <std::size_t N, int Dim = static_cast<int>(N) - 2>
State<Dim> outflow_flux(const std::array<double, N>& interior_trace) {
  return interior_trace;
}

/// Time average of the physical flux of a prescribed state over [t, t+dt]; `rule` is the
/// (N+1)-point Gauss rule in time. Returns nullopt where the prescription is absent.
template <int Dim>
std::optional<State<Dim>> inflow_flux(const std::type_identity_t<InflowFunction<Dim>>& fn, const std::type_identity_t<Point<Dim>>& x, double t, double dt,
                                      const GaussRule& rule, const Eos& eos, int dir) {
  State<Dim> F{};
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto w = fn(x, t + rule.nodes[q] * dt);
    if (!w) return std::nullopt;
    const State<Dim> u = prim_to_cons(*w, eos);
    axpy(F, rule.weights[q], flux(u, *w, dir));
  }
  return F;
}

}  // namespace rhd
