#pragma once

#include <algorithm>
#include <array>

#include "rhd/basis.hpp"

namespace rhd {

/// Largest stable dt * Lambda / dx for the single-stage update with Radau correction, per degree N = 1..4.
/// Measured with `rhd_lwfr cfl-sweep`: bisection on smooth_advection_1d, 32 cells, t = 2, no limiter,
/// safety 1, rounded down to two significant digits. A run counts as stable when its final L1(rho) error
/// stays within 10x of the error at a tenth of the candidate value; a 2x threshold gives the same values.
/// At these values the error still grows only linearly up to t = 20. Re-run the sweep after changing the scheme.
inline constexpr std::array<double, kMaxDegree + 1> kCflByDegree = {0.0, 0.34, 0.17, 0.10, 0.068};

/// Pure subcell finite-volume mode: dt * Lambda / (w_min dx) with w_min the smallest Gauss weight on [0,1].
inline constexpr double kFirstOrderSubcellCfl = 0.9;

inline double first_order_cfl(const BasisTables& t) {
  return kFirstOrderSubcellCfl * *std::min_element(t.weights.begin(), t.weights.end());
}

inline double default_cfl(int degree) {
  require_degree(degree);
  return kCflByDegree[degree];
}

}  // namespace rhd
