#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rhd/alw.hpp"
#include "rhd/basis.hpp"
#include "rhd/blending.hpp"
#include "rhd/boundary.hpp"
#include "rhd/cfl_defaults.hpp"
#include "rhd/errors.hpp"
#include "rhd/indicator.hpp"
#include "rhd/lwfr.hpp"
#include "rhd/mesh.hpp"
#include "rhd/output.hpp"
#include "rhd/physics.hpp"
#include "rhd/problems.hpp"
#include "rhd/tvb.hpp"

namespace rhd {

/// blend: indicator-driven subcell blending with admissibility control.
/// none: plain single-stage update. tvb: a-posteriori minmod-TVB.
/// first_order: pure subcell finite volume (alpha = 1 everywhere).
enum class LimiterKind { blend, none, tvb, first_order };
enum class IndicatorKind { modal, legacy };

inline LimiterKind parse_limiter(const std::string& s) {
  if (s == "blend") return LimiterKind::blend;
  if (s == "none") return LimiterKind::none;
  if (s == "tvb") return LimiterKind::tvb;
  if (s == "fo" || s == "first_order") return LimiterKind::first_order;
  throw ConfigError("unknown limiter '" + s + "'");
}

inline IndicatorKind parse_indicator(const std::string& s) {
  if (s == "new" || s == "modal") return IndicatorKind::modal;
  if (s == "legacy") return IndicatorKind::legacy;
  throw ConfigError("unknown indicator '" + s + "'");
}

struct RunConfig {
  std::string problem;
  int degree = 3;
  std::vector<int> cells;  ///< per direction; empty uses the problem default
  std::optional<double> cfl;
  std::optional<double> safety;
  std::optional<double> alpha_max;
  IndicatorKind indicator = IndicatorKind::modal;
  LimiterKind limiter = LimiterKind::blend;
  std::string output_dir;
  double output_every = 0.0;  ///< 0 writes only the initial and final states
  std::optional<double> t_final;
  bool paranoid = false;
  double tvb_m = 100.0;
  int max_retries = 10;
  std::optional<long> max_steps;
  bool audit = false;  ///< track conserved totals after every step

  void validate() const {
    require_degree(degree);
    for (int c : cells)
      if (c < degree + 1) throw ConfigError("cells per direction must be at least N+1");
    if (safety && !(*safety > 0.0 && *safety <= 1.0)) throw ConfigError("safety factor must lie in (0, 1]");
    if (cfl && !(*cfl > 0.0)) throw ConfigError("cfl must be positive");
    if (alpha_max && !(*alpha_max >= 0.0 && *alpha_max <= 1.0)) throw ConfigError("alpha_max must lie in [0, 1]");
    if (output_every < 0.0) throw ConfigError("output cadence must be non-negative");
    if (t_final && !(*t_final > 0.0)) throw ConfigError("final time must be positive");
  }
};

struct RunReport {
  long steps = 0;
  long rejected = 0;
  double wall_seconds = 0.0;
  double final_time = 0.0;
  std::vector<double> initial_total;
  std::vector<double> final_total;
  std::vector<double> boundary_inflow;  ///< time-integrated flux entering through physical boundaries
  std::vector<double> max_drift;        ///< max over steps of |total - total0 - inflow| / scale
  long fallback_elements = 0;           ///< element-steps that used the first-order time average
  long blended_elements = 0;            ///< element-steps with alpha > 0
  long limited_elements = 0;            ///< element-steps touched by the scaling or TVB limiter
  long violations = 0;
  std::vector<std::string> outputs;
};

template <int Dim>
class Solver {
 public:
  using S = State<Dim>;

  Solver(const ProblemSpec<Dim>& spec, const RunConfig& cfg)
      : spec_(spec), cfg_(cfg), eos_(spec.eos()), tables_(build_basis(cfg.degree)),
        modal_(extended_modal_transform(tables_)), legacy_(tables_, 1.0), layout_{cfg.degree + 1},
        time_rule_(gauss_legendre(cfg.degree + 1)), ws_(cfg.degree) {
    cfg_.validate();
    spec_.boundary.validate();
    std::array<int, Dim> n = spec.default_cells;
    if (!cfg.cells.empty()) {
      if (static_cast<int>(cfg.cells.size()) != Dim && cfg.cells.size() != 1)
        throw ConfigError("expected " + std::to_string(Dim) + " cell counts");
      for (int d = 0; d < Dim; ++d) n[d] = cfg.cells[cfg.cells.size() == 1 ? 0 : d];
    }
    for (int d = 0; d < Dim; ++d)
      if (n[d] < cfg.degree + 1) throw ConfigError("cells per direction must be at least N+1");
    mesh_ = Mesh<Dim>(n, spec.lower, spec.upper);
    field_ = sample_initial(spec_, mesh_, tables_);
    cfl_ = cfg.cfl ? *cfg.cfl : (cfg.limiter == LimiterKind::first_order ? first_order_cfl(tables_) : default_cfl(cfg.degree));
    safety_ = cfg.safety ? *cfg.safety : spec.safety;
    indicator_cfg_.alpha_max = cfg.alpha_max ? *cfg.alpha_max : spec.alpha_max;
    indicator_cfg_.validate();
    legacy_.alpha_max = indicator_cfg_.alpha_max;
    t_final_ = cfg.t_final ? *cfg.t_final : spec.t_final;
    allocate();
    initial_total_ = field_.total(tables_);
    next_output_ = cfg_.output_every > 0.0 ? cfg_.output_every : t_final_;
  }

  const SolutionField<Dim>& field() const { return field_; }
  SolutionField<Dim>& field() { return field_; }
  const BasisTables& tables() const { return tables_; }
  const Mesh<Dim>& mesh() const { return mesh_; }
  const Eos& eos() const { return eos_; }
  const ProblemSpec<Dim>& problem() const { return spec_; }
  double time() const { return time_; }
  double final_time() const { return t_final_; }
  double cfl() const { return cfl_; }
  double safety() const { return safety_; }
  const std::vector<double>& alpha() const { return blend_.element; }
  /// Unsmoothed indicator output alpha' per element from the last indicator pass.
  const std::vector<double>& raw_alpha() const { return raw_alpha_; }
  /// Runs the indicator on the current field without stepping; false if a node is not admissible.
  bool evaluate_indicator() { return compute_alpha(); }
  const RunReport& report() const { return report_; }
  const S& boundary_inflow() const { return inflow_; }
  const S& initial_total() const { return initial_total_; }
  /// Final face fluxes of the last accepted step, direction d, [face*Nf + k].
  const std::vector<S>& face_fluxes(int d) const { return face_flux_[d]; }
  double last_dt() const { return last_dt_; }

  /// dt from the current element means; throws StepFailure if a mean is not admissible.
  double stable_dt() {
    if (!update_means()) throw StepFailure("element mean not admissible at t=" + std::to_string(time_));
    return compute_dt(lam_, mesh_, cfl_, safety_);
  }

  /// Advances by one accepted step with halving retries. Returns false once t_final is reached.
  bool step() {
    if (done()) return false;
    double dt = stable_dt();
    const double target = std::min(t_final_, next_output_);
    bool hits_target = false;
    if (time_ + dt >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      dt = target - time_;
      hits_target = true;
    }
    saved_ = field_.nodes;
    const S inflow_saved = inflow_, inflow_abs_saved = inflow_abs_;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
      if (attempt > 0) {
        dt *= 0.5;
        hits_target = false;
      }
      if (try_step(dt)) {
        time_ = hits_target ? target : time_ + dt;
        last_dt_ = dt;
        ++report_.steps;
        if (cfg_.paranoid) check_nodes();
        if (cfg_.audit) audit();
        return true;
      }
      field_.nodes = saved_;
      inflow_ = inflow_saved;
      inflow_abs_ = inflow_abs_saved;
      ++report_.rejected;
    }
    throw StepFailure("step failed after " + std::to_string(cfg_.max_retries) + " dt halvings at t=" +
                      std::to_string(time_));
  }

  bool done() const {
    if (cfg_.max_steps && report_.steps >= *cfg_.max_steps) return true;
    return time_ >= t_final_ - 1e-14 * std::max(1.0, std::abs(t_final_));
  }

  /// Runs to completion, writing outputs at the configured cadence.
  RunReport run() {
    const auto start = std::chrono::steady_clock::now();
    if (cfg_.audit) audit();
    write_output();
    while (step()) {
      if (time_ >= next_output_ - 1e-14 * std::max(1.0, next_output_)) {
        if (time_ < t_final_ - 1e-14 * std::max(1.0, t_final_)) write_output();
        next_output_ = cfg_.output_every > 0.0 ? next_output_ + cfg_.output_every : t_final_;
        if (next_output_ > t_final_) next_output_ = t_final_;
      }
    }
    write_output();
    report_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report_.final_time = time_;
    report_.initial_total.assign(initial_total_.begin(), initial_total_.end());
    const S tot = field_.total(tables_);
    report_.final_total.assign(tot.begin(), tot.end());
    report_.boundary_inflow.assign(inflow_.begin(), inflow_.end());
    if (report_.max_drift.empty()) report_.max_drift.assign(Dim + 2, 0.0);
    return report_;
  }

  /// |total - total0 - inflow| / scale per component. The scale is the larger of the initial domain
  /// integral of |u_c| (equal to |total0| for sign-definite components) and the accumulated boundary
  /// flux magnitude, so that components whose total starts at ~0 are measured against what moved.
  std::vector<double> drift() const {
    const S tot = field_.total(tables_);
    std::vector<double> out(Dim + 2);
    for (int c = 0; c < Dim + 2; ++c) {
      const double scale = std::max({std::abs(initial_total_[c]), abs_total_[c], inflow_abs_[c]});
      out[c] = std::abs(tot[c] - initial_total_[c] - inflow_[c]) / (scale > 0.0 ? scale : 1.0);
    }
    return out;
  }

 private:
  ProblemSpec<Dim> spec_;
  RunConfig cfg_;
  Eos eos_;
  BasisTables tables_;
  ModalTransform modal_;
  LegacyIndicator legacy_;
  NodeLayout<Dim> layout_;
  GaussRule time_rule_;
  ElementWorkspace<Dim> ws_;
  IndicatorConfig indicator_cfg_;
  std::vector<double> raw_alpha_;
  Mesh<Dim> mesh_;
  SolutionField<Dim> field_;
  double cfl_ = 0.0, safety_ = 0.95, t_final_ = 0.0;
  double time_ = 0.0, next_output_ = 0.0, last_dt_ = 0.0;
  int output_index_ = 0;
  RunReport report_;
  S initial_total_{}, inflow_{}, inflow_abs_{}, abs_total_{};

  std::vector<S> means_;
  std::vector<std::array<double, Dim>> lam_;
  BlendCoefficients<Dim> blend_;
  std::array<std::vector<S>, Dim> vol_flux_;
  std::vector<S> trace_flux_, trace_sol_;
  std::array<std::vector<S>, Dim> sub_;
  std::array<std::vector<S>, Dim> face_flux_;
  std::vector<S> saved_;
  std::vector<double> K_;
  FaceTraces<Dim> traces_;
  std::vector<S> gather_, high_, low_;

  int nf() const { return layout_.face_nodes(); }
  int np() const { return layout_.nodes(); }

  void allocate() {
    const int ne = mesh_.num_elements();
    means_.resize(ne);
    lam_.resize(ne);
    blend_.element.assign(ne, 0.0);
    face_alpha(mesh_, spec_.boundary.periodic_mask(), blend_);
    for (int d = 0; d < Dim; ++d) {
      vol_flux_[d].resize(static_cast<std::size_t>(ne) * np());
      sub_[d].resize(static_cast<std::size_t>(ne) * nf() * cfg_.degree);
      face_flux_[d].resize(static_cast<std::size_t>(mesh_.num_faces(d)) * nf());
    }
    trace_flux_.resize(static_cast<std::size_t>(ne) * 2 * Dim * nf());
    trace_sol_.resize(trace_flux_.size());
    K_.resize(static_cast<std::size_t>(ne) * np());
    gather_.resize(2 * Dim * nf());
    high_.resize(np());
    low_.resize(np());
    for (const auto& u : field_.nodes)
      for (int c = 0; c < Dim + 2; ++c) abs_total_[c] += std::abs(u[c]);
    for (int c = 0; c < Dim + 2; ++c) abs_total_[c] *= mesh_.element_measure() / np();
  }

  std::array<double, Dim> ratio(double dt) const {
    std::array<double, Dim> r{};
    for (int d = 0; d < Dim; ++d) r[d] = dt / mesh_.step(d);
    return r;
  }

  bool update_means() {
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      means_[e] = field_.mean(e, tables_);
      Primitive<Dim> w;
      if (recover_primitive(means_[e], eos_, w) != Recovery::ok) return false;
      for (int d = 0; d < Dim; ++d) lam_[e][d] = max_wave_speed(w, eos_, d);
      /// prescribed inflow states enter the element within the step, so their speeds bound dt too
      const auto c = mesh_.coords(e);
      for (int d = 0; d < Dim; ++d)
        for (int s = 0; s < 2; ++s) {
          const int side = 2 * d + s;
          if (spec_.boundary.kind[side] != BoundaryKind::inflow || c[d] != (s ? mesh_.cells[d] - 1 : 0)) continue;
          const int tr = (Dim == 1) ? 0 : c[1 - d];
          for (int line = 0; line < nf(); ++line) {
            const auto wb = spec_.boundary.inflow[side](face_point(d, c[d] + s, tr, line), time_);
            if (!wb) continue;
            for (int dd = 0; dd < Dim; ++dd) lam_[e][dd] = std::max(lam_[e][dd], max_wave_speed(*wb, eos_, dd));
          }
        }
    }
    return true;
  }

  /// Nodal K of a ghost element mirrored across side (d, s) of element e.
  void mirror_ghost(int e, int d, std::vector<double>& ghost) const {
    const double* own = K_.data() + static_cast<std::size_t>(e) * np();
    const int n = layout_.n;
    for (int line = 0; line < nf(); ++line)
      for (int pos = 0; pos < n; ++pos) ghost[layout_.node(d, pos, line)] = own[layout_.node(d, n - 1 - pos, line)];
  }

  Point<Dim> face_point(int d, int f, int tr, int k) const {
    Point<Dim> x{};
    x[d] = mesh_.lower[d] + f * mesh_.step(d);
    if constexpr (Dim == 2) x[1 - d] = mesh_.lower[1 - d] + (tr + tables_.nodes[k]) * mesh_.step(1 - d);
    return x;
  }

  bool compute_alpha() {
    const int ne = mesh_.num_elements();
    std::vector<double> raw(ne, 0.0);
    for (int e = 0; e < ne; ++e)
      for (int k = 0; k < np(); ++k) {
        Primitive<Dim> w;
        if (recover_primitive(field_.at(e, k), eos_, w) != Recovery::ok) return false;
        K_[static_cast<std::size_t>(e) * np() + k] =
            cfg_.indicator == IndicatorKind::modal ? indicator_quantity(w) : w.rho * w.p;
      }
    if (cfg_.indicator == IndicatorKind::legacy) {
      for (int e = 0; e < ne; ++e)
        raw[e] = legacy_.template operator()<Dim>(std::span<const double>(K_.data() + static_cast<std::size_t>(e) * np(), np()));
    } else {
      std::array<std::vector<double>, 2 * Dim> ghosts;
      for (auto& g : ghosts) g.resize(np());
      for (int e = 0; e < ne; ++e) {
        std::array<std::span<const double>, 2 * Dim> nb;
        const auto c = mesh_.coords(e);
        for (int d = 0; d < Dim; ++d)
          for (int s = 0; s < 2; ++s) {
            const int side = 2 * d + s;
            const int other = neighbor_element(mesh_, spec_.boundary, e, d, s);
            if (other >= 0) {
              nb[side] = std::span<const double>(K_.data() + static_cast<std::size_t>(other) * np(), np());
              continue;
            }
            mirror_ghost(e, d, ghosts[side]);
            if (spec_.boundary.kind[side] == BoundaryKind::inflow) {
              const int tr = (Dim == 1) ? 0 : c[1 - d];
              const int f = c[d] + s;
              for (int line = 0; line < nf(); ++line) {
                const auto w = spec_.boundary.inflow[side](face_point(d, f, tr, line), time_);
                if (!w) continue;
                const double kin = indicator_quantity(*w);
                for (int pos = 0; pos < layout_.n; ++pos) ghosts[side][layout_.node(d, pos, line)] = kin;
              }
            }
            nb[side] = ghosts[side];
          }
        const std::vector<double> grid =
            extended_field<Dim>(std::span<const double>(K_.data() + static_cast<std::size_t>(e) * np(), np()), nb, tables_);
        raw[e] = alpha_from_energy(energy_ratio<Dim>(grid, modal_, cfg_.degree), indicator_cfg_);
      }
    }
    blend_ = smooth_alpha(mesh_, raw, spec_.boundary.periodic_mask());
    raw_alpha_ = std::move(raw);
    return true;
  }

  bool element_pass(double dt) {
    const auto r = ratio(dt);
    const RhdFluxModel<Dim> model{eos_};
    bool forced = false;
    const int side_len = 2 * Dim * nf();
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      const auto el = field_.element(e);
      std::copy(el.begin(), el.end(), ws_.u.begin());
      AlwStatus st = alw_time_average(ws_, tables_, r, model);
      if (st == AlwStatus::ok) st = alw_face_traces(ws_, tables_, model, traces_);
      if (st != AlwStatus::ok) {
        if (cfg_.limiter != LimiterKind::blend) return false;
        if (!first_order_fallback(ws_, model, traces_)) return false;
        blend_.element[e] = 1.0;
        forced = true;
        ++report_.fallback_elements;
      }
      for (int d = 0; d < Dim; ++d)
        std::copy(ws_.F[d].begin(), ws_.F[d].end(), vol_flux_[d].begin() + static_cast<std::size_t>(e) * np());
      std::copy(traces_.flux.begin(), traces_.flux.end(), trace_flux_.begin() + static_cast<std::size_t>(e) * side_len);
      std::copy(traces_.solution.begin(), traces_.solution.end(),
                trace_sol_.begin() + static_cast<std::size_t>(e) * side_len);
    }
    if (forced) face_alpha(mesh_, spec_.boundary.periodic_mask(), blend_);
    return true;
  }

  bool subcell_pass() {
    for (int e = 0; e < mesh_.num_elements(); ++e) {
      std::array<std::span<S>, Dim> sub;
      for (int d = 0; d < Dim; ++d)
        sub[d] = std::span<S>(sub_[d].data() + static_cast<std::size_t>(e) * nf() * cfg_.degree, nf() * cfg_.degree);
      if (!subcell_fluxes<Dim>(field_.element(e), tables_, eos_, sub)) return false;
    }
    return true;
  }

  const S& trace(std::vector<S>& v, int e, int side, int k) {
    return v[(static_cast<std::size_t>(e) * 2 * Dim + side) * nf() + k];
  }

  bool face_pass(double dt) {
    const int N = cfg_.degree;
    const double kfac = (Dim == 1) ? 1.0 : 0.5;
    const bool high = cfg_.limiter != LimiterKind::first_order;
    const bool low_needed = cfg_.limiter == LimiterKind::blend || cfg_.limiter == LimiterKind::first_order;
    for (int d = 0; d < Dim; ++d) {
      const double dx = mesh_.step(d);
      const double cl = dt / (kfac * tables_.weights[N] * dx);
      const double cr = dt / (kfac * tables_.weights[0] * dx);
      const int ntrans = (Dim == 1) ? 1 : mesh_.cells[1 - d];
      for (int tr = 0; tr < ntrans; ++tr)
        for (int f = 0; f <= mesh_.cells[d]; ++f) {
          int L = mesh_.face_element(d, f, tr, 0);
          int R = mesh_.face_element(d, f, tr, 1);
          if (spec_.boundary.periodic(d)) {
            if (L < 0) L = mesh_.face_element(d, mesh_.cells[d], tr, 0);
            if (R < 0) R = mesh_.face_element(d, 0, tr, 1);
          }
          const int fidx = mesh_.face_index(d, f, tr);
          const double alpha = cfg_.limiter == LimiterKind::first_order ? 1.0
                               : cfg_.limiter == LimiterKind::blend   ? blend_.face[d][fidx]
                                                                       : 0.0;
          for (int k = 0; k < nf(); ++k) {
            S Fbar{}, low{}, ghost_node{};
            const S* uL = nullptr;
            const S* uR = nullptr;
            std::array<FaceSide<Dim>, 2> sides{};
            if (L >= 0) {
              uL = &field_.at(L, layout_.node(d, N, k));
              sides[0] = {uL, &sub_[d][(static_cast<std::size_t>(L) * nf() + k) * N + (N - 1)], cl, 1.0};
            }
            if (R >= 0) {
              uR = &field_.at(R, layout_.node(d, 0, k));
              sides[1] = {uR, &sub_[d][(static_cast<std::size_t>(R) * nf() + k) * N + 0], cr, -1.0};
            }
            if (L >= 0 && R >= 0) {
              if (high) {
                const double lam = std::max(lam_[L][d], lam_[R][d]);
                Fbar = rusanov_face_flux(trace(trace_flux_, L, 2 * d + 1, k), trace(trace_flux_, R, 2 * d, k),
                                         trace(trace_sol_, L, 2 * d + 1, k), trace(trace_sol_, R, 2 * d, k), lam);
              }
              if (low_needed && !try_low_order_flux(*uL, *uR, d, eos_, low)) return false;
            } else {
              const bool lower_side = L < 0;
              const int I = lower_side ? R : L;
              const int side = 2 * d + (lower_side ? 0 : 1);
              const S& Fi = trace(trace_flux_, I, side, k);
              const S& Ui = trace(trace_sol_, I, side, k);
              const S& ui = lower_side ? *uR : *uL;
              BoundaryKind kind = spec_.boundary.kind[side];
              const Point<Dim> xf = face_point(d, f, tr, k);
              std::optional<Primitive<Dim>> inlet;
              if (kind == BoundaryKind::inflow) {
                inlet = spec_.boundary.inflow[side](xf, time_);
                if (!inlet) kind = BoundaryKind::outflow;
              }
              switch (kind) {
                case BoundaryKind::reflective: {
                  const S Fg = reflect_flux(Fi, d), Ug = reflect_state(Ui, d);
                  if (high)
                    Fbar = lower_side ? rusanov_face_flux(Fg, Fi, Ug, Ui, lam_[I][d])
                                      : rusanov_face_flux(Fi, Fg, Ui, Ug, lam_[I][d]);
                  ghost_node = reflect_state(ui, d);
                  break;
                }
                case BoundaryKind::inflow: {
                  if (high) Fbar = *inflow_flux<Dim>(spec_.boundary.inflow[side], xf, time_, dt, time_rule_, eos_, d);
                  ghost_node = prim_to_cons(*inlet, eos_);
                  break;
                }
                default:
                  if (high) Fbar = outflow_flux(Fi);
                  ghost_node = ui;
              }
              if (low_needed) {
                const bool ok = lower_side ? try_low_order_flux(ghost_node, ui, d, eos_, low)
                                           : try_low_order_flux(ui, ghost_node, d, eos_, low);
                if (!ok) return false;
              }
            }
            S F;
            if (cfg_.limiter == LimiterKind::first_order) {
              F = low;
            } else if (cfg_.limiter == LimiterKind::blend) {
              const S cand = initial_blended_flux(Fbar, low, alpha);
              F = correct_face_flux<Dim>(cand, low, std::span<const FaceSide<Dim>>(sides.data(), 2));
            } else {
              F = Fbar;
            }
            face_flux_[d][static_cast<std::size_t>(fidx) * nf() + k] = F;
            if (L < 0 || R < 0) {
              const double wt = dt * ((Dim == 1) ? 1.0 : tables_.weights[k] * mesh_.step(1 - d));
              axpy(inflow_, L < 0 ? wt : -wt, F);
              for (int c = 0; c < Dim + 2; ++c) inflow_abs_[c] += wt * std::abs(F[c]);
            }
          }
        }
    }
    return true;
  }

  void gather_faces(int e) {
    const auto c = mesh_.coords(e);
    for (int d = 0; d < Dim; ++d)
      for (int s = 0; s < 2; ++s) {
        const int tr = (Dim == 1) ? 0 : c[1 - d];
        const int fidx = mesh_.face_index(d, c[d] + s, tr);
        for (int k = 0; k < nf(); ++k)
          gather_[(2 * d + s) * nf() + k] = face_flux_[d][static_cast<std::size_t>(fidx) * nf() + k];
      }
  }

  bool try_step(double dt) {
    const auto r = ratio(dt);
    const int ne = mesh_.num_elements();
    if (cfg_.limiter == LimiterKind::blend) {
      if (!compute_alpha()) return false;
    } else {
      blend_.element.assign(ne, cfg_.limiter == LimiterKind::first_order ? 1.0 : 0.0);
      face_alpha(mesh_, spec_.boundary.periodic_mask(), blend_);
    }
    if (cfg_.limiter != LimiterKind::first_order && !element_pass(dt)) return false;
    if ((cfg_.limiter == LimiterKind::blend || cfg_.limiter == LimiterKind::first_order) && !subcell_pass())
      return false;
    if (!face_pass(dt)) return false;

    for (int e = 0; e < ne; ++e) {
      const double a = blend_.element[e];
      auto el = field_.element(e);
      gather_faces(e);
      if (a < 1.0) {
        std::array<std::span<const S>, Dim> F;
        for (int d = 0; d < Dim; ++d)
          F[d] = std::span<const S>(vol_flux_[d].data() + static_cast<std::size_t>(e) * np(), np());
        high_order_update<Dim>(el, F, gather_, tables_, r, high_);
      }
      if (a > 0.0) {
        std::array<std::span<const S>, Dim> sub;
        for (int d = 0; d < Dim; ++d)
          sub[d] = std::span<const S>(sub_[d].data() + static_cast<std::size_t>(e) * nf() * cfg_.degree,
                                      nf() * cfg_.degree);
        low_order_subcell_update<Dim>(el, sub, gather_, tables_, r, low_);
        ++report_.blended_elements;
      }
      if (a <= 0.0) std::copy(high_.begin(), high_.end(), el.begin());
      else if (a >= 1.0) std::copy(low_.begin(), low_.end(), el.begin());
      else blend<Dim>(high_, low_, a, el);
    }

    if (cfg_.limiter == LimiterKind::tvb) report_.limited_elements += tvb_limit(field_, tables_, spec_.boundary, cfg_.tvb_m);
    for (int e = 0; e < ne; ++e) {
      const S m = field_.mean(e, tables_);
      if (!is_admissible(m)) return false;
      if (cfg_.limiter == LimiterKind::blend || cfg_.limiter == LimiterKind::first_order) {
        if (scaling_limiter<Dim>(field_.element(e), m) < 1.0) ++report_.limited_elements;
      }
    }
    return true;
  }

  void check_nodes() {
    for (int e = 0; e < mesh_.num_elements(); ++e)
      for (int k = 0; k < np(); ++k)
        if (!is_admissible(field_.at(e, k))) {
          ++report_.violations;
          const auto x = field_.position(e, k, tables_);
          throw StepFailure("admissibility violation at x=" + std::to_string(x[0]) + " t=" + std::to_string(time_));
        }
  }

  void audit() {
    const auto dr = drift();
    if (report_.max_drift.empty()) report_.max_drift.assign(Dim + 2, 0.0);
    for (int c = 0; c < Dim + 2; ++c) report_.max_drift[c] = std::max(report_.max_drift[c], dr[c]);
  }

  void write_output() {
    if (cfg_.output_dir.empty()) return;
    std::filesystem::create_directories(cfg_.output_dir);
    char name[64];
    std::snprintf(name, sizeof name, "%s_%04d.%s", spec_.id.c_str(), output_index_++, Dim == 1 ? "csv" : "vtk");
    const std::string path = (std::filesystem::path(cfg_.output_dir) / name).string();
    if constexpr (Dim == 1) write_csv_1d(field_, tables_, eos_, blend_.element, path);
    else write_vtk_2d(field_, tables_, eos_, blend_.element, time_, path);
    report_.outputs.push_back(path);
  }
};

}  // namespace rhd
