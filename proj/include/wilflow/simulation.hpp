#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wilflow/geometry.hpp"
#include "wilflow/schemes.hpp"
#include "wilflow/shapes.hpp"

namespace wilflow {

struct RunConfig {
  ShapeSpec shape = Semicircle{};
  double eps = 0.0;
  double kbar = 0.0;
  std::size_t J = 128;
  double dt = 1e-3;
  double T = 1.0;
  SchemeKind scheme = SchemeKind::Linear;
  double picard_tol = 1e-10;
  std::size_t picard_max = 100;
  std::vector<double> snapshot_times;
  std::string output_dir = "out";
  /// Defaults to StateThresholds::defaults_for(initial curve).
  std::optional<StateThresholds> thresholds;
  std::size_t obj_azimuthal_segments = 64;
  bool write_obj = false;

  Topology topology() const { return topology_of(shape); }
  std::size_t num_steps() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;

  bool operator==(const RunConfig &) const = default;
};

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string &message)
      : std::invalid_argument(message), field_(std::move(field)) {}
  const std::string &field() const { return field_; }

 private:
  std::string field_;
};

struct DiagnosticsRow {
  std::size_t step = 0;
  double t = 0.0;
  double energy = 0.0;
  double mesh_ratio = 1.0;
  double min_r = 0.0;  ///< smallest distance to the axis over non-boundary nodes
  double max_V = 0.0;
  std::size_t picard_iters = 0;
  double residual = 0.0;
  double stability_defect = 0.0;
  /// Discrete velocity bounds: max |(X^m - X^{m-1})_s| / dt and
  /// max |(X^m - X^{m-1}).e1 / (dt X^m.e1)| over non-boundary nodes.
  double vertex_speed_s = 0.0;
  double vertex_speed_r = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::size_t step = 0;
  PolygonalCurve curve;
  std::vector<double> varkappa;
  std::vector<double> kappa;
  std::vector<double> V;
};

enum class Termination { Completed, PinchOff, Degenerate, PicardDivergence, WellPosedness };

const char *to_string(Termination t);

struct RunOutput {
  std::vector<DiagnosticsRow> diagnostics;
  std::vector<Snapshot> snapshots;
  Termination termination = Termination::Completed;
  double termination_time = 0.0;
  std::size_t termination_step = 0;
  std::string message;
  SchemeState final_state;
  ShapeStats final_stats;
  double max_residual = 0.0;
  double max_stability_defect = 0.0;  ///< max over steps of defect / max(1, E)
};

/// Called after every accepted step with the new state and its report.
using StepObserver = std::function<void(const SchemeState &, const StepReport &)>;

/// Builds the initial data and time-steps until T or until the state check
/// or a solver reports a breakdown, which ends the run with the
/// corresponding Termination and the last valid state. A run that ends early
/// also snapshots its last valid state.
RunOutput run_simulation(const RunConfig &config, const StepObserver &observer = {});

}  // namespace wilflow
