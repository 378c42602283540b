#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rhd/analysis.hpp"
#include "rhd/cfl_defaults.hpp"
#include "rhd/output.hpp"
#include "rhd/problems.hpp"
#include "rhd/solver.hpp"

namespace {

struct Options {
  std::string problem;
  int degree = 3;
  std::string cells;
  double cfl = 0.0;
  double safety = 0.0;
  double alpha_max = -1.0;
  std::string indicator = "new";
  std::string limiter = "blend";
  std::string out;
  double output_every = 0.0;
  double t_final = 0.0;
  bool paranoid = false;
  double tvb_m = 100.0;
  std::string grids = "8,16,32,64,128";
  std::string norm_variable = "rho";
  std::string cut;
};

std::vector<int> parse_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw rhd::ConfigError("bad integer list '" + s + "'");
    }
  }
  return out;
}

rhd::RunConfig make_config(const Options& o) {
  rhd::RunConfig cfg;
  cfg.problem = o.problem;
  cfg.degree = o.degree;
  if (!o.cells.empty()) cfg.cells = parse_list(o.cells);
  if (o.cfl > 0.0) cfg.cfl = o.cfl;
  if (o.safety > 0.0) cfg.safety = o.safety;
  if (o.alpha_max >= 0.0) cfg.alpha_max = o.alpha_max;
  cfg.indicator = rhd::parse_indicator(o.indicator);
  cfg.limiter = rhd::parse_limiter(o.limiter);
  cfg.output_dir = o.out;
  cfg.output_every = o.output_every;
  if (o.t_final > 0.0) cfg.t_final = o.t_final;
  cfg.paranoid = o.paranoid;
  cfg.tvb_m = o.tvb_m;
  cfg.audit = true;
  cfg.validate();
  return cfg;
}

void print_state(const char* label, const std::vector<double>& v) {
  std::printf("%-16s", label);
  for (double x : v) std::printf(" % .10e", x);
  std::printf("\n");
}

template <int Dim>
int run_solve(const rhd::ProblemSpec<Dim>& spec, const rhd::RunConfig& cfg, const Options& o) {
  rhd::Solver<Dim> solver(spec, cfg);
  const rhd::RunReport r = solver.run();
  std::printf("problem          %s\n", spec.id.c_str());
  std::printf("degree           %d\n", cfg.degree);
  std::printf("cells           ");
  for (int d = 0; d < Dim; ++d) std::printf(" %d", solver.mesh().cells[d]);
  std::printf("\ncfl, safety      %.4g %.4g\n", solver.cfl(), solver.safety());
  std::printf("final time       %.17g\n", r.final_time);
  std::printf("steps            %ld (rejected %ld)\n", r.steps, r.rejected);
  std::printf("blended elems    %ld, fallback %ld, limited %ld\n", r.blended_elements, r.fallback_elements,
              r.limited_elements);
  print_state("initial total", r.initial_total);
  print_state("final total", r.final_total);
  print_state("boundary inflow", r.boundary_inflow);
  print_state("max drift", r.max_drift);
  if (spec.has_exact()) {
    const auto var = rhd::parse_norm_variable(o.norm_variable);
    const auto n = rhd::error_norms<Dim>(
        solver.field(), solver.tables(), solver.eos(),
        [&](const rhd::Point<Dim>& x) { return spec.exact(x, r.final_time); }, var);
    std::printf("error %-4s       L1 %.6e  L2 %.6e  Linf %.6e\n", o.norm_variable.c_str(), n.l1, n.l2, n.linf);
  }
  std::printf("wall seconds     %.3f\n", r.wall_seconds);
  for (const auto& p : r.outputs) std::printf("wrote            %s\n", p.c_str());
  if constexpr (Dim == 2) {
    if (!o.cut.empty() && !o.out.empty()) {
      const rhd::CutKind kind = o.cut == "diagonal" ? rhd::CutKind::diagonal
                                : o.cut == "x"      ? rhd::CutKind::x_axis
                                                    : rhd::CutKind::y_axis;
      const double offset = 0.5 * (kind == rhd::CutKind::x_axis ? spec.lower[1] + spec.upper[1]
                                                                 : spec.lower[0] + spec.upper[0]);
      const std::string path = o.out + "/" + spec.id + "_cut_" + o.cut + ".csv";
      rhd::write_line_cut(solver.field(), solver.tables(), solver.eos(), kind, offset, path);
      std::printf("wrote            %s\n", path.c_str());
    }
  }
  return 0;
}

template <int Dim>
int run_converge(const rhd::ProblemSpec<Dim>& spec, const rhd::RunConfig& cfg, const Options& o) {
  const auto grids = parse_list(o.grids);
  if (grids.size() < 2) throw rhd::ConfigError("need at least two grids");
  const auto rows = rhd::convergence_study(spec, cfg, grids, rhd::parse_norm_variable(o.norm_variable));
  std::printf("%8s %14s %8s %14s %8s %14s %8s %8s\n", "cells", "L1", "order", "L2", "order", "Linf", "order",
              "steps");
  for (const auto& r : rows)
    std::printf("%8d %14.6e %8.4f %14.6e %8.4f %14.6e %8.4f %8ld\n", r.cells, r.err.l1, r.order_l1, r.err.l2,
                r.order_l2, r.err.linf, r.order_linf, r.steps);
  return 0;
}

/// Final L1(rho) of unlimited smooth advection at a given cfl; infinity if the run breaks down.
double sweep_error(int degree, int cells, double cfl) {
  const auto spec = rhd::make_problem_1d("smooth_advection_1d");
  rhd::RunConfig cfg;
  cfg.degree = degree;
  cfg.cfl = cfl;
  cfg.safety = 1.0;
  cfg.limiter = rhd::LimiterKind::none;
  cfg.max_retries = 0;
  try {
    const auto f = rhd::solve_field(spec, cfg, cells);
    const auto n = rhd::error_norms<1>(f, rhd::build_basis(degree), spec.eos(),
                                       [&](const rhd::Point<1>& x) { return spec.exact(x, spec.t_final); });
    return std::isfinite(n.l1) ? n.l1 : INFINITY;
  } catch (const std::exception&) {
    return INFINITY;
  }
}

int run_cfl_sweep(const std::vector<int>& degrees, int cells, double factor) {
  std::printf("%6s %10s %14s\n", "degree", "cfl", "L1 at cfl");
  for (int N : degrees) {
    double lo = 0.01, hi = 1.0;
    auto stable = [&](double c) {
      const double e = sweep_error(N, cells, c);
      const double e_ref = sweep_error(N, cells, 0.1 * c);
      return std::isfinite(e) && e <= factor * e_ref;
    };
    while ((hi - lo) > 0.005 * lo) {
      const double mid = 0.5 * (lo + hi);
      if (stable(mid)) lo = mid; else hi = mid;
    }
    const double digits = std::pow(10.0, std::floor(std::log10(lo)) - 1.0);
    const double rounded = std::floor(lo / digits) * digits;
    std::printf("%6d %10.3g %14.6e\n", N, rounded, sweep_error(N, cells, rounded));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lax-Wendroff flux reconstruction for special relativistic hydrodynamics"};
  app.set_config("--config", "", "INI file with [solve] / [converge] sections; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--problem", o.problem, "problem id")->required();
    sub->add_option("--degree", o.degree, "polynomial degree N (1..4)");
    sub->add_option("--cfl", o.cfl, "override the per-degree CFL number");
    sub->add_option("--safety", o.safety, "safety factor l_s (problem default, usually 0.95)");
    sub->add_option("--alpha-max", o.alpha_max, "upper bound of the blending coefficient");
    sub->add_option("--indicator", o.indicator, "new | legacy");
    sub->add_option("--limiter", o.limiter, "blend | none | tvb | fo");
    sub->add_option("--t-final", o.t_final, "override the final time");
    sub->add_option("--tvb-m", o.tvb_m, "TVB constant M");
    sub->add_option("--norm-variable", o.norm_variable, "rho | D | v1 | v2 | p");
  };

  auto* solve = app.add_subcommand("solve", "run one problem");
  add_common(solve);
  solve->add_option("--cells", o.cells, "nx or nx,ny");
  solve->add_option("--out", o.out, "output directory");
  solve->add_option("--output-every", o.output_every, "simulation-time interval between outputs");
  solve->add_flag("--paranoid", o.paranoid, "scan every node for admissibility after each step");
  solve->add_option("--cut", o.cut, "2D line cut of the final state: diagonal | x | y");

  auto* converge = app.add_subcommand("converge", "convergence study over a list of grids");
  add_common(converge);
  converge->add_option("--grids", o.grids, "comma separated cell counts");

  auto* sweep = app.add_subcommand("cfl-sweep", "empirical stability limit on smooth advection");
  std::string sweep_degrees = "1,2,3,4";
  int sweep_cells = 32;
  double sweep_factor = 10.0;
  sweep->add_option("--degrees", sweep_degrees, "degrees to sweep");
  sweep->add_option("--cells", sweep_cells, "cells");
  sweep->add_option("--factor", sweep_factor, "allowed error growth relative to a tenth of the cfl");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (sweep->parsed()) return run_cfl_sweep(parse_list(sweep_degrees), sweep_cells, sweep_factor);
    const rhd::RunConfig cfg = make_config(o);
    const int dim = rhd::problem_dimension(o.problem);
    if (solve->parsed()) {
      if (dim == 1) return run_solve<1>(rhd::make_problem_1d(o.problem), cfg, o);
      return run_solve<2>(rhd::make_problem_2d(o.problem), cfg, o);
    }
    if (dim == 1) return run_converge<1>(rhd::make_problem_1d(o.problem), cfg, o);
    return run_converge<2>(rhd::make_problem_2d(o.problem), cfg, o);
  } catch (const rhd::StepFailure& e) {
    std::fprintf(stderr, "step failure: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
