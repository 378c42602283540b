#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "rhd/basis.hpp"
#include "rhd/errors.hpp"
#include "rhd/physics.hpp"

namespace rhd {

/// Uniform Cartesian mesh of Dim-dimensional boxes.
template <int Dim>
struct Mesh {
  std::array<int, Dim> cells{};
  std::array<double, Dim> lower{};
  std::array<double, Dim> upper{};

  Mesh() = default;
  Mesh(std::array<int, Dim> n, std::array<double, Dim> lo, std::array<double, Dim> hi)
      : cells(n), lower(lo), upper(hi) {
    for (int d = 0; d < Dim; ++d) {
      if (n[d] < 1) throw ConfigError("cell count must be positive");
      if (!(hi[d] > lo[d])) throw ConfigError("domain upper bound must exceed lower bound");
    }
  }

  double step(int d) const { return (upper[d] - lower[d]) / cells[d]; }
  int num_elements() const {
    int n = 1;
    for (int c : cells) n *= c;
    return n;
  }
  double measure() const {
    double m = 1.0;
    for (int d = 0; d < Dim; ++d) m *= upper[d] - lower[d];
    return m;
  }
  double element_measure() const {
    double m = 1.0;
    for (int d = 0; d < Dim; ++d) m *= step(d);
    return m;
  }
  std::array<int, Dim> coords(int e) const {
    std::array<int, Dim> c{};
    c[0] = e % cells[0];
    if constexpr (Dim == 2) c[1] = e / cells[0];
    return c;
  }
  int index(const std::array<int, Dim>& c) const {
    if constexpr (Dim == 1) return c[0];
    else return c[0] + cells[0] * c[1];
  }
  /// Number of faces normal to direction d.
  int num_faces(int d) const {
    int n = 1;
    for (int k = 0; k < Dim; ++k) n *= (k == d) ? cells[k] + 1 : cells[k];
    return n;
  }
  /// Face normal to d at position f along d, transverse element t.
  int face_index(int d, int f, int t) const {
    if constexpr (Dim == 1) return f;
    else return d == 0 ? f + (cells[0] + 1) * t : t + cells[0] * f;
  }
  /// Element adjacent to face (d, f, t) on the given side (0 below, 1 above) without wrapping; -1 outside.
  int face_element(int d, int f, int t, int side) const {
    const int pos = side == 0 ? f - 1 : f;
    if (pos < 0 || pos >= cells[d]) return -1;
    std::array<int, Dim> c{};
    c[d] = pos;
    if constexpr (Dim == 2) c[1 - d] = t;
    return index(c);
  }
};

/// Index arithmetic for tensor-product nodes inside one element.
template <int Dim>
struct NodeLayout {
  int n = 1;  ///< nodes per direction

  int nodes() const { return Dim == 1 ? n : n * n; }
  int face_nodes() const { return Dim == 1 ? 1 : n; }
  /// Node at position pos along direction d on transverse line `line`.
  int node(int d, int pos, int line) const {
    if constexpr (Dim == 1) return pos;
    else return d == 0 ? pos + n * line : line + n * pos;
  }
  double weight(const BasisTables& t, int node) const {
    if constexpr (Dim == 1) return t.weights[node];
    else return t.weights[node % n] * t.weights[node / n];
  }
};

/// Nodal values for all elements, element-major.
template <int Dim>
struct SolutionField {
  Mesh<Dim> mesh;
  int degree = 1;
  NodeLayout<Dim> layout;
  std::vector<State<Dim>> nodes;

  SolutionField() = default;
  SolutionField(const Mesh<Dim>& m, int deg) : mesh(m), degree(deg), layout{deg + 1} {
    nodes.assign(static_cast<std::size_t>(mesh.num_elements()) * layout.nodes(), State<Dim>{});
  }

  int nodes_per_element() const { return layout.nodes(); }
  std::span<State<Dim>> element(int e) {
    return {nodes.data() + static_cast<std::size_t>(e) * layout.nodes(), static_cast<std::size_t>(layout.nodes())};
  }
  std::span<const State<Dim>> element(int e) const {
    return {nodes.data() + static_cast<std::size_t>(e) * layout.nodes(), static_cast<std::size_t>(layout.nodes())};
  }
  State<Dim>& at(int e, int node) { return nodes[static_cast<std::size_t>(e) * layout.nodes() + node]; }
  const State<Dim>& at(int e, int node) const { return nodes[static_cast<std::size_t>(e) * layout.nodes() + node]; }

  Point<Dim> position(int e, int node, const BasisTables& t) const {
    const auto c = mesh.coords(e);
    Point<Dim> x{};
    x[0] = mesh.lower[0] + (c[0] + t.nodes[node % layout.n]) * mesh.step(0);
    if constexpr (Dim == 2) x[1] = mesh.lower[1] + (c[1] + t.nodes[node / layout.n]) * mesh.step(1);
    return x;
  }

  State<Dim> mean(int e, const BasisTables& t) const {
    State<Dim> m{};
    const auto el = element(e);
    for (int k = 0; k < layout.nodes(); ++k) axpy(m, layout.weight(t, k), el[k]);
    return m;
  }

  /// Domain integral of the conserved variables.
  State<Dim> total(const BasisTables& t) const {
    State<Dim> s{};
    const double vol = mesh.element_measure();
    for (int e = 0; e < mesh.num_elements(); ++e) axpy(s, vol, mean(e, t));
    return s;
  }
};

template <int Dim>
double element_mean_weighted(std::span<const double> values, const NodeLayout<Dim>& lay, const BasisTables& t) {
  double s = 0.0;
  for (int k = 0; k < lay.nodes(); ++k) s += lay.weight(t, k) * values[k];
  return s;
}

}  // namespace rhd
