#pragma once

#include <variant>

#include "wilflow/geometry.hpp"

namespace wilflow {

// Initial generating curves. All are traversed clockwise in the (r, z)
// plane so that nu = -tau^perp points out of the enclosed region.

/// Half circle of radius r0 centred on the axis (sphere). Node j sits at
/// angle (1/2 - rho_j) pi + eps cos((1/2 - rho_j) pi).
struct Semicircle {
  double radius = 1.0;

  bool operator==(const Semicircle &) const = default;
};

/// Disc of total width `width` (diameter) and thickness `height`: flat top
/// and bottom attached to the axis, half-circle rim of radius height/2.
struct Disc {
  double width = 7.0;
  double height = 1.0;

  bool operator==(const Disc &) const = default;
};

/// Cylinder of diameter `width` and total height `height` with hemispherical
/// caps of radius width/2.
struct RoundedCylinder {
  double width = 2.0;
  double height = 6.0;

  bool operator==(const RoundedCylinder &) const = default;
};

/// Closed stadium (cigar) elongated along r: total extent length x height,
/// centred at `center`.
struct Stadium {
  double length = 4.0;
  double height = 1.0;
  Vec2 center{4.0, 0.0};

  bool operator==(const Stadium &) const = default;
};

/// Circle of radius `minor` centred at (major, 0). Node j sits at angle
/// (1/4 - rho_j) 2 pi + eps cos((1/4 - rho_j) 2 pi).
struct TorusCircle {
  double major = 1.4142135623730951;
  double minor = 1.0;

  bool operator==(const TorusCircle &) const = default;
};

using ShapeSpec = std::variant<Semicircle, Disc, RoundedCylinder, Stadium, TorusCircle>;

Topology topology_of(const ShapeSpec &shape);

/// Nodal interpolation of the shape on J elements. eps perturbs the angular
/// parameterization of Semicircle and TorusCircle and is ignored otherwise;
/// the remaining shapes are sampled uniformly in arclength.
PolygonalCurve build_curve(const ShapeSpec &shape, std::size_t J, double eps = 0.0);

}  // namespace wilflow
