#include "wilflow/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wilflow/fe_systems.hpp"

namespace wilflow {

const char *to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::PinchOff: return "pinch_off";
    case Termination::Degenerate: return "degenerate";
    case Termination::PicardDivergence: return "picard_divergence";
    case Termination::WellPosedness: return "well_posedness_violation";
  }
  return "?";
}

std::size_t RunConfig::num_steps() const {
  return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

void RunConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "dt must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("T", "T must be positive");
  if (J < 4) throw ConfigError("J", "J must be at least 4");
  if (!std::isfinite(kbar)) throw ConfigError("kbar", "kbar must be finite");
  if (!(std::abs(eps) < 1.0)) throw ConfigError("eps", "eps must satisfy |eps| < 1");
  if (!(picard_tol > 0.0)) throw ConfigError("picard_tol", "picard_tol must be positive");
  if (picard_max == 0) throw ConfigError("picard_max", "picard_max must be positive");
  for (double s : snapshot_times)
    if (!(s >= 0.0 && s <= T * (1.0 + 1e-12)))
      throw ConfigError("snapshot_times", "snapshot times must lie in [0, T]");
  if (obj_azimuthal_segments < 3)
    throw ConfigError("obj_azimuthal_segments", "need at least 3 azimuthal segments");
}

namespace {

DiagnosticsRow diagnostics_row(const SchemeState &st, double energy, double dt) {
  DiagnosticsRow row;
  row.step = st.step;
  row.t = st.t;
  row.energy = energy;
  row.mesh_ratio = mesh_ratio(st.Xm);
  row.min_r = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < st.Xm.num_nodes(); ++j) {
    if (st.Xm.is_boundary_node(j)) continue;
    row.min_r = std::min(row.min_r, st.Xm[j].r);
    const Vec2 w = (st.Xm[j] - st.Xm_prev[j]) / dt;
    row.vertex_speed_r = std::max(row.vertex_speed_r, std::abs(w.r / st.Xm[j].r));
  }
  for (std::size_t e = 0; e < st.Xm.num_elements(); ++e) {
    const Vec2 dw = (st.Xm.segment(e) - st.Xm_prev.segment(e)) / dt;
    row.vertex_speed_s = std::max(row.vertex_speed_s, norm(dw) / norm(st.Xm.segment(e)));
  }
  return row;
}

}  // namespace

RunOutput run_simulation(const RunConfig &config, const StepObserver &observer) {
  config.validate();
  PolygonalCurve Y0 = build_curve(config.shape, config.J, config.eps);
  if (Y0.signed_area2() > 0.0) Y0 = Y0.reversed();  // nu must point outwards
  const StateThresholds thresholds =
      config.thresholds.value_or(StateThresholds::defaults_for(Y0));
  const SchemeParams params{config.kbar, config.dt};
  const std::size_t M = config.num_steps();

  RunOutput out;
  std::vector<bool> taken(config.snapshot_times.size(), false);
  auto maybe_snapshot = [&](const SchemeState &st, const std::vector<double> &V) {
    for (std::size_t k = 0; k < taken.size(); ++k) {
      if (taken[k] || std::abs(st.t - config.snapshot_times[k]) > 0.5 * config.dt) continue;
      taken[k] = true;
      out.snapshots.push_back({st.t, st.step, st.Xm, st.varkappa, st.kappa, V});
    }
  };

  std::vector<double> last_V;
  const InitialData init = make_initial_data(Y0);
  SchemeState state = SchemeState::initial(init);
  out.max_residual = init.residual;
  {
    auto row = diagnostics_row(state, discrete_energy(state.Xm, state.varkappa, config.kbar),
                               config.dt);
    row.residual = init.residual;
    out.diagnostics.push_back(row);
    maybe_snapshot(state, std::vector<double>(state.Xm.num_nodes(), 0.0));
  }

  auto stop = [&](Termination why, std::string msg) {
    out.termination = why;
    out.termination_time = state.t;
    out.termination_step = state.step;
    out.message = std::move(msg);
  };

  for (std::size_t m = 0; m < M; ++m) {
    const StateCheck check = validate_state(state.Xm, thresholds);
    if (check != StateCheck::Ok) {
      stop(check == StateCheck::PinchOff ? Termination::PinchOff : Termination::Degenerate,
           std::string("state check failed: ") + to_string(check));
      break;
    }
    try {
      auto [next, rep] = config.scheme == SchemeKind::Linear
                             ? step_linear(state, params)
                             : step_nonlinear(state, params, config.picard_tol,
                                              config.picard_max);
      state = std::move(next);
      const double energy = rep.energy(config.scheme);
      auto row = diagnostics_row(state, energy, config.dt);
      for (double v : rep.V) row.max_V = std::max(row.max_V, std::abs(v));
      row.picard_iters = rep.picard_iters;
      row.residual = rep.max_residual();
      row.stability_defect = rep.stability_defect(config.scheme);
      out.max_residual = std::max(out.max_residual, row.residual);
      out.max_stability_defect = std::max(
          out.max_stability_defect, row.stability_defect / std::max(1.0, rep.energy_before));
      out.diagnostics.push_back(row);
      maybe_snapshot(state, rep.V);
      last_V = rep.V;
      if (observer) observer(state, rep);
    } catch (const PicardDivergence &ex) {
      stop(Termination::PicardDivergence, ex.what());
      break;
    } catch (const WellPosednessViolation &ex) {
      stop(Termination::WellPosedness, ex.what());
      break;
    } catch (const DegenerateMesh &ex) {
      stop(Termination::Degenerate, ex.what());
      break;
    }
  }
  if (out.termination == Termination::Completed) {
    // the final state itself must still be admissible
    const StateCheck check = validate_state(state.Xm, thresholds);
    if (check != StateCheck::Ok)
      stop(check == StateCheck::PinchOff ? Termination::PinchOff : Termination::Degenerate,
           std::string("state check failed: ") + to_string(check));
    else
      stop(Termination::Completed, "reached final time");
  }
  if (out.termination != Termination::Completed &&
      (out.snapshots.empty() || out.snapshots.back().step != state.step)) {
    // keep the last valid curve of a run that ended early
    if (last_V.empty()) last_V.assign(state.Xm.num_nodes(), 0.0);
    out.snapshots.push_back({state.t, state.step, state.Xm, state.varkappa, state.kappa, last_V});
  }
  out.final_stats = shape_stats(state.Xm);
  out.final_state = std::move(state);
  return out;
}

}  // namespace wilflow
