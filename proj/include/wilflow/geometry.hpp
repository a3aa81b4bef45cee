#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wilflow {

/// Point or vector in the meridian half-plane: r is the distance to the
/// rotation axis, z the coordinate along it.
struct Vec2 {
  double r = 0.0;
  double z = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) { r += o.r; z += o.z; return *this; }
  constexpr Vec2 &operator-=(const Vec2 &o) { r -= o.r; z -= o.z; return *this; }
  constexpr Vec2 &operator*=(double s) { r *= s; z *= s; return *this; }

  bool operator==(const Vec2 &) const = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
constexpr Vec2 operator-(const Vec2 &a) { return {-a.r, -a.z}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
constexpr Vec2 operator/(Vec2 a, double s) { return {a.r / s, a.z / s}; }
constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.r * b.r + a.z * b.z; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.r * b.z - a.z * b.r; }
inline double norm(const Vec2 &a) { return std::hypot(a.r, a.z); }

/// Clockwise quarter turn: (v1, v2) -> (v2, -v1).
constexpr Vec2 perp(const Vec2 &v) { return {v.z, -v.r}; }

enum class Topology {
  Open,     ///< both ends attached to the axis, genus-0 surface
  Periodic  ///< closed curve, genus-1 surface
};

const char *to_string(Topology t);
Topology topology_from_string(const std::string &s);

class DegenerateMesh : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polygonal generating curve on a uniform partition of the reference
/// interval. Open curves store J+1 nodes, periodic curves J nodes (node J is
/// identified with node 0). Element e joins node e to node e+1 (mod J when
/// periodic), so both topologies have J elements.
///
/// Construction only checks sizes. Geometric invariants (positive radius,
/// attachment to the axis, nonzero segments) are checked by build_curve and
/// validate_state.
class PolygonalCurve {
 public:
  PolygonalCurve() = default;
  PolygonalCurve(Topology topology, std::vector<Vec2> nodes);

  Topology topology() const { return topology_; }
  bool is_open() const { return topology_ == Topology::Open; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_elements() const {
    return is_open() ? nodes_.size() - 1 : nodes_.size();
  }
  /// Node indices (left, right) of element e.
  std::size_t left(std::size_t e) const { return e; }
  std::size_t right(std::size_t e) const {
    return e + 1 == nodes_.size() ? 0 : e + 1;
  }
  bool is_boundary_node(std::size_t j) const {
    return is_open() && (j == 0 || j + 1 == nodes_.size());
  }
  Vec2 segment(std::size_t e) const { return nodes_[right(e)] - nodes_[left(e)]; }

  const std::vector<Vec2> &nodes() const { return nodes_; }
  const Vec2 &operator[](std::size_t j) const { return nodes_[j]; }

  /// Same curve traversed backwards.
  PolygonalCurve reversed() const;
  /// Twice the signed enclosed area of the curve closed up by the axis
  /// segment (Open) or of the polygon itself (Periodic). Negative for
  /// clockwise traversal, which is the outward-normal orientation.
  double signed_area2() const;

 private:
  Topology topology_ = Topology::Open;
  std::vector<Vec2> nodes_;
};

/// Piecewise-constant geometry of one element.
struct ElementFrame {
  Vec2 tau;
  Vec2 nu;
  double len = 0.0;
};

std::vector<ElementFrame> element_frames(const PolygonalCurve &curve);

/// Lumped vertex normals. omega is the nodal field with
/// (omega, xi |X_rho|)^h = (nu, xi |X_rho|) for all piecewise-linear xi;
/// omega_partial drops the e1 component at Open boundary nodes.
struct VertexNormals {
  std::vector<Vec2> omega;
  std::vector<Vec2> omega_partial;
};

VertexNormals vertex_normals(const PolygonalCurve &curve,
                             const std::vector<ElementFrame> &frames);

double mesh_ratio(const PolygonalCurve &curve);

struct ShapeStats {
  Vec2 center;
  double mean_radius = 0.0;
  double deviation = 1.0;
  double mesh_ratio = 1.0;
};

ShapeStats shape_stats(const PolygonalCurve &curve);

struct StateThresholds {
  double r_min = 0.0;
  double len_min = 0.0;

  /// r_min = 1e-3 * max r, len_min = 1e-8 * mean segment length of the
  /// given (initial) curve.
  static StateThresholds defaults_for(const PolygonalCurve &initial);

  bool operator==(const StateThresholds &) const = default;
};

enum class StateCheck { Ok, PinchOff, Degenerate };

const char *to_string(StateCheck c);

StateCheck validate_state(const PolygonalCurve &curve, const StateThresholds &thresholds);

}  // namespace wilflow
