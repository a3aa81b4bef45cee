#include "wilflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace wilflow {

using nlohmann::json;

namespace {

template <class T>
T get_field(const json &j, const std::string &key, const std::string &path, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  const json &v = j.at(key);
  try {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw std::invalid_argument("expected a number");
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw std::invalid_argument("expected a nonnegative integer");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw std::invalid_argument("expected a string");
    }
    return v.get<T>();
  } catch (const std::exception &ex) {
    throw ConfigError(path + key, path + key + ": " + ex.what());
  }
}

void reject_unknown(const json &j, const std::set<std::string> &known, const std::string &path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "config" : path.substr(0, path.size() - 1),
                                        "expected a JSON object");
  for (const auto &[k, v] : j.items())
    if (!known.count(k)) throw ConfigError(path + k, "unknown field '" + path + k + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json shape_to_json(const ShapeSpec &shape) {
  return std::visit(
      [](const auto &s) -> json {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Semicircle>)
          return {{"type", "semicircle"}, {"radius", s.radius}};
        else if constexpr (std::is_same_v<S, Disc>)
          return {{"type", "disc"}, {"width", s.width}, {"height", s.height}};
        else if constexpr (std::is_same_v<S, RoundedCylinder>)
          return {{"type", "rounded_cylinder"}, {"width", s.width}, {"height", s.height}};
        else if constexpr (std::is_same_v<S, Stadium>)
          return {{"type", "stadium"},
                  {"length", s.length},
                  {"height", s.height},
                  {"center", {s.center.r, s.center.z}}};
        else
          return {{"type", "torus_circle"}, {"major", s.major}, {"minor", s.minor}};
      },
      shape);
}

ShapeSpec shape_from_json(const json &j) {
  const std::string p = "shape.";
  if (!j.is_object()) throw ConfigError("shape", "shape must be an object with a 'type'");
  const std::string type = get_field<std::string>(j, "type", p, "");
  if (type == "semicircle") {
    reject_unknown(j, {"type", "radius"}, p);
    Semicircle s;
    s.radius = get_field(j, "radius", p, s.radius);
    if (!(s.radius > 0.0)) throw ConfigError("shape.radius", "radius must be positive");
    return s;
  }
  if (type == "disc" || type == "rounded_cylinder") {
    reject_unknown(j, {"type", "width", "height"}, p);
    auto read = [&](auto s) -> ShapeSpec {
      s.width = get_field(j, "width", p, s.width);
      s.height = get_field(j, "height", p, s.height);
      if (!(s.width > 0.0)) throw ConfigError("shape.width", "width must be positive");
      if (!(s.height > 0.0)) throw ConfigError("shape.height", "height must be positive");
      return s;
    };
    return type == "disc" ? read(Disc{}) : read(RoundedCylinder{});
  }
  if (type == "stadium") {
    reject_unknown(j, {"type", "length", "height", "center"}, p);
    Stadium s;
    s.length = get_field(j, "length", p, s.length);
    s.height = get_field(j, "height", p, s.height);
    if (j.contains("center")) {
      const json &c = j.at("center");
      if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw ConfigError("shape.center", "center must be [r, z]");
      s.center = {c[0].get<double>(), c[1].get<double>()};
    }
    if (!(s.length > 0.0)) throw ConfigError("shape.length", "length must be positive");
    if (!(s.height > 0.0)) throw ConfigError("shape.height", "height must be positive");
    if (!(s.center.r - 0.5 * s.length > 0.0))
      throw ConfigError("shape.center", "stadium must stay off the rotation axis");
    return s;
  }
  if (type == "torus_circle") {
    reject_unknown(j, {"type", "major", "minor"}, p);
    TorusCircle s;
    s.major = get_field(j, "major", p, s.major);
    s.minor = get_field(j, "minor", p, s.minor);
    if (!(s.minor > 0.0)) throw ConfigError("shape.minor", "minor radius must be positive");
    if (!(s.major > s.minor))
      throw ConfigError("shape.major", "major radius must exceed the minor radius");
    return s;
  }
  throw ConfigError("shape.type", "unknown shape type '" + type +
                                      "' (semicircle, disc, rounded_cylinder, stadium, "
                                      "torus_circle)");
}

RunConfig config_from_json(const json &j) {
  reject_unknown(j,
                 {"shape", "eps", "kbar", "J", "dt", "T", "scheme", "picard_tol", "picard_max",
                  "snapshot_times", "output_dir", "thresholds", "obj_azimuthal_segments",
                  "write_obj"},
                 "");
  RunConfig c;
  if (!j.contains("shape")) throw ConfigError("shape", "missing required field 'shape'");
  c.shape = shape_from_json(j.at("shape"));
  for (const char *required : {"kbar", "J", "dt", "T"})
    if (!j.contains(required))
      throw ConfigError(required, std::string("missing required field '") + required + "'");
  c.eps = get_field(j, "eps", "", c.eps);
  c.kbar = get_field(j, "kbar", "", c.kbar);
  c.J = get_field(j, "J", "", c.J);
  c.dt = get_field(j, "dt", "", c.dt);
  c.T = get_field(j, "T", "", c.T);
  try {
    c.scheme = scheme_from_string(get_field<std::string>(j, "scheme", "", "linear"));
  } catch (const std::invalid_argument &ex) {
    throw ConfigError("scheme", ex.what());
  }
  c.picard_tol = get_field(j, "picard_tol", "", c.picard_tol);
  c.picard_max = get_field(j, "picard_max", "", c.picard_max);
  if (j.contains("snapshot_times")) {
    const json &s = j.at("snapshot_times");
    if (!s.is_array()) throw ConfigError("snapshot_times", "snapshot_times must be an array");
    for (const auto &v : s) {
      if (!v.is_number()) throw ConfigError("snapshot_times", "snapshot times must be numbers");
      c.snapshot_times.push_back(v.get<double>());
    }
  }
  c.output_dir = get_field(j, "output_dir", "", c.output_dir);
  if (j.contains("thresholds") && !j.at("thresholds").is_null()) {
    const json &t = j.at("thresholds");
    reject_unknown(t, {"r_min", "len_min"}, "thresholds.");
    StateThresholds th;
    th.r_min = get_field(t, "r_min", "thresholds.", 0.0);
    th.len_min = get_field(t, "len_min", "thresholds.", 0.0);
    if (!(th.r_min >= 0.0)) throw ConfigError("thresholds.r_min", "r_min must be nonnegative");
    if (!(th.len_min >= 0.0))
      throw ConfigError("thresholds.len_min", "len_min must be nonnegative");
    c.thresholds = th;
  }
  c.obj_azimuthal_segments = get_field(j, "obj_azimuthal_segments", "", c.obj_azimuthal_segments);
  c.write_obj = get_field(j, "write_obj", "", c.write_obj);
  c.validate();
  return c;
}

json config_to_json(const RunConfig &c) {
  json j = {{"shape", shape_to_json(c.shape)},
            {"eps", c.eps},
            {"kbar", c.kbar},
            {"J", c.J},
            {"dt", c.dt},
            {"T", c.T},
            {"scheme", to_string(c.scheme)},
            {"picard_tol", c.picard_tol},
            {"picard_max", c.picard_max},
            {"snapshot_times", c.snapshot_times},
            {"output_dir", c.output_dir},
            {"obj_azimuthal_segments", c.obj_azimuthal_segments},
            {"write_obj", c.write_obj}};
  j["thresholds"] = c.thresholds ? json{{"r_min", c.thresholds->r_min},
                                        {"len_min", c.thresholds->len_min}}
                                 : json(nullptr);
  return j;
}

RunConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &ex) {
    throw ConfigError("config", std::string("invalid JSON: ") + ex.what());
  }
  return config_from_json(j);
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow> &rows) {
  std::ostringstream os;
  os << "step,t,energy,mesh_ratio,min_r,max_V,picard_iters,residual\n";
  for (const auto &r : rows)
    os << r.step << ',' << format_double(r.t) << ',' << format_double(r.energy) << ','
       << format_double(r.mesh_ratio) << ',' << format_double(r.min_r) << ','
       << format_double(r.max_V) << ',' << r.picard_iters << ',' << format_double(r.residual)
       << '\n';
  return os.str();
}

std::string snapshot_csv(const Snapshot &snap) {
  std::ostringstream os;
  os << "j,rho,r,z,varkappa,kappa,V\n";
  const std::size_t n = snap.curve.num_nodes();
  const double J = static_cast<double>(snap.curve.num_elements());
  for (std::size_t j = 0; j < n; ++j)
    os << j << ',' << format_double(static_cast<double>(j) / J) << ','
       << format_double(snap.curve[j].r) << ',' << format_double(snap.curve[j].z) << ','
       << format_double(snap.varkappa[j]) << ',' << format_double(snap.kappa[j]) << ','
       << format_double(snap.V[j]) << '\n';
  return os.str();
}

std::string snapshot_filename(double t, const char *prefix, const char *ext) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s_t%.4f.%s", prefix, t, ext);
  return buf;
}

PolygonalCurve read_curve_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open curve file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty curve file");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) header.push_back(cell);
  }
  std::size_t ir = header.size(), iz = header.size();
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == "r") ir = k;
    if (header[k] == "z") iz = k;
  }
  if (ir == header.size() || iz == header.size())
    throw std::runtime_error("curve file needs 'r' and 'z' columns");
  std::vector<Vec2> nodes;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    if (cells.size() < header.size()) throw std::runtime_error("short row in curve file");
    nodes.push_back({std::stod(cells[ir]), std::stod(cells[iz])});
  }
  if (nodes.size() < 3) throw std::runtime_error("curve file has too few nodes");
  const Topology top = nodes.front().r == 0.0 ? Topology::Open : Topology::Periodic;
  return PolygonalCurve(top, std::move(nodes));
}

json run_meta(const RunConfig &config, const RunOutput &out) {
  const auto &s = out.final_stats;
  return {{"config", config_to_json(config)},
          {"termination", to_string(out.termination)},
          {"termination_time", out.termination_time},
          {"termination_step", out.termination_step},
          {"message", out.message},
          {"final_stats",
           {{"center", {s.center.r, s.center.z}},
            {"mean_radius", s.mean_radius},
            {"deviation", s.deviation},
            {"mesh_ratio", s.mesh_ratio},
            {"energy", out.diagnostics.empty() ? 0.0 : out.diagnostics.back().energy}}},
          {"max_residual", out.max_residual},
          {"max_stability_defect", out.max_stability_defect}};
}

namespace {

void write_text(const std::filesystem::path &p, const std::string &text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
  if (!f) throw std::runtime_error("error writing " + p.string());
}

}  // namespace

void write_run_outputs(const RunConfig &config, const RunOutput &out) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "diagnostics.csv", diagnostics_csv(out.diagnostics));
  for (const auto &snap : out.snapshots) {
    write_text(dir / snapshot_filename(snap.t, "curve", "csv"), snapshot_csv(snap));
    if (config.write_obj)
      write_text(dir / snapshot_filename(snap.t, "surface", "obj"),
                 revolve(snap.curve, config.obj_azimuthal_segments).to_obj());
  }
  write_text(dir / "meta.json", run_meta(config, out).dump(2) + "\n");
}

long SurfaceMesh::euler_characteristic() const {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (const auto &f : faces)
    for (std::size_t k = 0; k < f.size(); ++k) {
      const std::size_t a = f[k], b = f[(k + 1) % f.size()];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  return static_cast<long>(vertices.size()) - static_cast<long>(edges.size()) +
         static_cast<long>(faces.size());
}

std::string SurfaceMesh::to_obj() const {
  std::ostringstream os;
  os << "# surface of revolution\n";
  for (const auto &v : vertices)
    os << "v " << format_double(v[0]) << ' ' << format_double(v[1]) << ' '
       << format_double(v[2]) << '\n';
  for (const auto &f : faces) {
    os << 'f';
    for (std::size_t i : f) os << ' ' << i + 1;
    os << '\n';
  }
  return os.str();
}

SurfaceMesh revolve(const PolygonalCurve &curve, std::size_t segments) {
  if (segments < 3) throw std::invalid_argument("revolve: need at least 3 segments");
  const std::size_t n = curve.num_nodes();
  const std::size_t S = segments;
  SurfaceMesh mesh;
  // ring[j] is the first vertex of node j; poles get a single vertex
  std::vector<std::size_t> ring(n);
  std::vector<bool> pole(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    ring[j] = mesh.vertices.size();
    const Vec2 p = curve[j];
    if (curve.is_boundary_node(j)) {
      pole[j] = true;
      mesh.vertices.push_back({0.0, 0.0, p.z});
      continue;
    }
    for (std::size_t k = 0; k < S; ++k) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(S);
      mesh.vertices.push_back({p.r * std::cos(phi), p.r * std::sin(phi), p.z});
    }
  }
  auto vid = [&](std::size_t j, std::size_t k) { return pole[j] ? ring[j] : ring[j] + k % S; };
  for (std::size_t e = 0; e < curve.num_elements(); ++e) {
    const std::size_t a = curve.left(e), b = curve.right(e);
    for (std::size_t k = 0; k < S; ++k) {
      // along the curve first, then in azimuth: outward for clockwise curves
      std::vector<std::size_t> f;
      for (std::size_t v : {vid(a, k), vid(b, k), vid(b, k + 1), vid(a, k + 1)})
        if (f.empty() || (f.back() != v && f.front() != v)) f.push_back(v);
      mesh.faces.push_back(std::move(f));
    }
  }
  return mesh;
}

}  // namespace wilflow
