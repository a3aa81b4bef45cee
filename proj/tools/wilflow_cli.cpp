#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "wilflow/analysis.hpp"
#include "wilflow/io.hpp"
#include "wilflow/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wilflow;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

int fail(int code, const std::string &kind, const std::string &message,
         const std::string &field = {}) {
  json err = {{"error", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << err.dump() << '\n';
  return code;
}

unsigned study_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char *env = std::getenv("WILFLOW_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<unsigned>(v);
    } catch (const std::exception &) {
    }
  }
  return hw;
}

int cmd_run(const std::string &config_path, const std::string &out_override) {
  RunConfig config;
  try {
    config = load_config(config_path);
    if (!out_override.empty()) config.output_dir = out_override;
  } catch (const ConfigError &ex) {
    return fail(kConfigError, "config", ex.what(), ex.field());
  }
  RunOutput out;
  try {
    out = run_simulation(config);
  } catch (const std::exception &ex) {
    return fail(kNumericalFailure, "numerical", ex.what());
  }
  try {
    write_run_outputs(config, out);
  } catch (const std::exception &ex) {
    return fail(kNumericalFailure, "io", ex.what());
  }
  const auto &s = out.final_stats;
  std::cout << "termination: " << to_string(out.termination) << " at t = " << out.termination_time
            << " (step " << out.termination_step << ")\n"
            << "final energy: " << format_double(out.diagnostics.back().energy) << '\n'
            << "center: (" << s.center.r << ", " << s.center.z << "), mean radius "
            << s.mean_radius << ", deviation " << s.deviation << ", mesh ratio " << s.mesh_ratio
            << '\n'
            << "outputs in " << config.output_dir << '\n';
  switch (out.termination) {
    case Termination::Completed:
    case Termination::PinchOff:
      return kOk;
    default:
      return fail(kNumericalFailure, to_string(out.termination), out.message);
  }
}

int cmd_converge(const std::string &kind_name, std::size_t levels, std::string out_dir,
                 double eps) {
  StudyKind kind;
  try {
    kind = study_from_string(kind_name);
  } catch (const std::invalid_argument &ex) {
    return fail(kConfigError, "config", ex.what(), "kind");
  }
  if (levels == 0 || levels > 5)
    return fail(kConfigError, "config", "levels must be between 1 and 5", "levels");
  if (!(std::abs(eps) < 1.0)) return fail(kConfigError, "config", "|eps| must be < 1", "eps");
  StudyOptions opt;
  opt.eps = eps;
  opt.threads = study_threads();
  ConvergenceTable table;
  try {
    table = convergence_study(kind, levels, opt);
  } catch (const std::exception &ex) {
    return fail(kNumericalFailure, "numerical", ex.what());
  }
  if (out_dir.empty()) out_dir = std::string("converge_") + to_string(kind);
  try {
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / "table.csv") << table.to_csv();
    std::ofstream(fs::path(out_dir) / "table.txt") << table.to_text();
  } catch (const std::exception &ex) {
    return fail(kNumericalFailure, "io", ex.what());
  }
  std::cout << table.to_text();
  return kOk;
}

int cmd_export(const std::string &curve_path, const std::string &obj_path, std::size_t segments) {
  if (segments < 3) return fail(kConfigError, "config", "need at least 3 segments", "segments");
  try {
    const SurfaceMesh mesh = revolve(read_curve_csv(curve_path), segments);
    std::ofstream f(obj_path);
    if (!f) throw std::runtime_error("cannot write " + obj_path);
    f << mesh.to_obj();
    std::cout << mesh.vertices.size() << " vertices, " << mesh.faces.size()
              << " faces, Euler characteristic " << mesh.euler_characteristic() << '\n';
  } catch (const std::exception &ex) {
    return fail(kConfigError, "input", ex.what(), "curve");
  }
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Axisymmetric Willmore flow with spontaneous curvature"};
  app.require_subcommand(1);

  std::string config_path, run_out;
  auto *run = app.add_subcommand("run", "Run one simulation from a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", run_out, "override output_dir");

  std::string kind, conv_out;
  std::size_t levels = 0;
  double eps = 0.1;
  auto *conv = app.add_subcommand("converge", "Convergence study (sphere-linear, "
                                              "sphere-nonlinear, torus)");
  conv->add_option("kind", kind, "study kind")->required();
  conv->add_option("levels", levels, "number of refinement levels (1-5)")->required();
  conv->add_option("--out", conv_out, "output directory");
  conv->add_option("--eps", eps, "nonuniform initial mesh parameter")->capture_default_str();

  std::string curve_path, obj_path;
  std::size_t segments = 64;
  auto *exp = app.add_subcommand("export-obj", "Revolve a curve CSV into an OBJ surface");
  exp->add_option("curve", curve_path, "curve_t*.csv file")->required();
  exp->add_option("out", obj_path, "output .obj")->required();
  exp->add_option("--segments", segments, "azimuthal segments")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kConfigError;
  }

  if (*run) return cmd_run(config_path, run_out);
  if (*conv) return cmd_converge(kind, levels, conv_out, eps);
  return cmd_export(curve_path, obj_path, segments);
}
