#include "wilflow/geometry.hpp"

#include <algorithm>
#include <limits>

namespace wilflow {

const char *to_string(Topology t) {
  return t == Topology::Open ? "open" : "periodic";
}

Topology topology_from_string(const std::string &s) {
  if (s == "open") return Topology::Open;
  if (s == "periodic") return Topology::Periodic;
  throw std::invalid_argument("unknown topology '" + s + "'");
}

PolygonalCurve::PolygonalCurve(Topology topology, std::vector<Vec2> nodes)
    : topology_(topology), nodes_(std::move(nodes)) {
  const std::size_t min_nodes = topology_ == Topology::Open ? 2 : 3;
  if (nodes_.size() < min_nodes)
    throw std::invalid_argument("PolygonalCurve: too few nodes for topology");
}

PolygonalCurve PolygonalCurve::reversed() const {
  std::vector<Vec2> rev(nodes_.rbegin(), nodes_.rend());
  if (!is_open()) {
    // keep node 0 in place so that periodic indices stay aligned
    std::rotate(rev.rbegin(), rev.rbegin() + 1, rev.rend());
  }
  return PolygonalCurve(topology_, std::move(rev));
}

double PolygonalCurve::signed_area2() const {
  double a = 0.0;
  const std::size_t n = nodes_.size();
  for (std::size_t j = 0; j < n; ++j)
    a += cross(nodes_[j], nodes_[(j + 1) % n]);
  return a;
}

std::vector<ElementFrame> element_frames(const PolygonalCurve &curve) {
  std::vector<ElementFrame> frames(curve.num_elements());
  for (std::size_t e = 0; e < frames.size(); ++e) {
    const Vec2 a = curve.segment(e);
    const double len = norm(a);
    if (!(len > 0.0))
      throw DegenerateMesh("zero-length segment at element " + std::to_string(e));
    frames[e].len = len;
    frames[e].tau = a / len;
    frames[e].nu = -perp(frames[e].tau);
  }
  return frames;
}

VertexNormals vertex_normals(const PolygonalCurve &curve,
                             const std::vector<ElementFrame> &frames) {
  const std::size_t n = curve.num_nodes();
  const std::size_t J = curve.num_elements();
  VertexNormals vn;
  vn.omega.assign(n, Vec2{});
  std::vector<double> weight(n, 0.0);
  for (std::size_t e = 0; e < J; ++e) {
    const Vec2 lnu = frames[e].len * frames[e].nu;
    vn.omega[curve.left(e)] += lnu;
    vn.omega[curve.right(e)] += lnu;
    weight[curve.left(e)] += frames[e].len;
    weight[curve.right(e)] += frames[e].len;
  }
  for (std::size_t j = 0; j < n; ++j) vn.omega[j] = vn.omega[j] / weight[j];
  vn.omega_partial = vn.omega;
  if (curve.is_open()) {
    vn.omega_partial.front().r = 0.0;
    vn.omega_partial.back().r = 0.0;
  }
  return vn;
}

double mesh_ratio(const PolygonalCurve &curve) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t e = 0; e < curve.num_elements(); ++e) {
    const double len = norm(curve.segment(e));
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  if (!(lo > 0.0)) throw DegenerateMesh("mesh_ratio: zero-length segment");
  return hi / lo;
}

ShapeStats shape_stats(const PolygonalCurve &curve) {
  const auto &x = curve.nodes();
  ShapeStats s;
  for (const Vec2 &p : x) s.center += p;
  s.center = s.center / static_cast<double>(x.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Vec2 &p : x) {
    const double d = norm(p - s.center);
    s.mean_radius += d;
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  s.mean_radius /= static_cast<double>(x.size());
  s.deviation = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  s.mesh_ratio = mesh_ratio(curve);
  return s;
}

StateThresholds StateThresholds::defaults_for(const PolygonalCurve &initial) {
  double rmax = 0.0;
  double total = 0.0;
  for (const Vec2 &p : initial.nodes()) rmax = std::max(rmax, p.r);
  for (std::size_t e = 0; e < initial.num_elements(); ++e)
    total += norm(initial.segment(e));
  return {1e-3 * rmax, 1e-8 * total / static_cast<double>(initial.num_elements())};
}

const char *to_string(StateCheck c) {
  switch (c) {
    case StateCheck::Ok: return "ok";
    case StateCheck::PinchOff: return "pinch_off";
    case StateCheck::Degenerate: return "degenerate";
  }
  return "?";
}

StateCheck validate_state(const PolygonalCurve &curve, const StateThresholds &thresholds) {
  for (std::size_t e = 0; e < curve.num_elements(); ++e) {
    const double len = norm(curve.segment(e));
    if (!(len >= thresholds.len_min) || !(len > 0.0)) return StateCheck::Degenerate;
  }
  for (std::size_t j = 0; j < curve.num_nodes(); ++j) {
    if (curve.is_boundary_node(j)) continue;
    if (!(curve[j].r >= thresholds.r_min) || !(curve[j].r > 0.0)) return StateCheck::PinchOff;
  }
  return StateCheck::Ok;
}

}  // namespace wilflow
