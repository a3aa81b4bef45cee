#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wilflow/geometry.hpp"
#include "wilflow/simulation.hpp"

namespace wilflow {

/// JSON <-> RunConfig. Unknown keys and ill-typed values raise ConfigError
/// naming the offending field; the result is validated.
RunConfig config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const RunConfig &config);
RunConfig load_config(const std::filesystem::path &path);

nlohmann::json shape_to_json(const ShapeSpec &shape);
ShapeSpec shape_from_json(const nlohmann::json &j);

/// Shortest decimal form that reads back to the same double (17 digits).
std::string format_double(double v);

std::string diagnostics_csv(const std::vector<DiagnosticsRow> &rows);
/// Columns j,rho,r,z,varkappa,kappa,V; rho_j = j / J.
std::string snapshot_csv(const Snapshot &snap);
std::string snapshot_filename(double t, const char *prefix, const char *ext);

/// Reads the r,z columns of a snapshot CSV. The curve is Open when its first
/// node lies on the axis (r == 0) and Periodic otherwise.
PolygonalCurve read_curve_csv(const std::filesystem::path &path);

nlohmann::json run_meta(const RunConfig &config, const RunOutput &out);

/// Writes diagnostics.csv, one curve_t<time>.csv per snapshot, meta.json and,
/// if requested, surface_t<time>.obj into config.output_dir.
void write_run_outputs(const RunConfig &config, const RunOutput &out);

struct SurfaceMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::vector<std::size_t>> faces;  ///< 0-based, outward orientation

  long euler_characteristic() const;
  std::string to_obj() const;
};

/// Revolves the generating curve about the z-axis: (r, z) -> (r cos p, r sin p, z).
/// Axis nodes of Open curves become single poles.
SurfaceMesh revolve(const PolygonalCurve &curve, std::size_t segments);

}  // namespace wilflow
