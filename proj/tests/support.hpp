#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wilflow/geometry.hpp"

namespace wilflow::testing {

/// Star-shaped periodic curve around (3, 0): radius 1 + noise, clockwise.
inline PolygonalCurve random_periodic(std::mt19937 &rng, std::size_t J, double amp = 0.2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> nodes;
  for (std::size_t j = 0; j < J; ++j) {
    const double th = -2.0 * std::numbers::pi * (j + 0.3 * u(rng)) / J;
    const double rad = 1.0 + amp * u(rng);
    nodes.push_back({3.0 + rad * std::cos(th), rad * std::sin(th)});
  }
  return PolygonalCurve(Topology::Periodic, std::move(nodes));
}

/// Perturbed clockwise half circle with endpoints on the axis.
inline PolygonalCurve random_open(std::mt19937 &rng, std::size_t J, double amp = 0.2) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec2> nodes;
  for (std::size_t j = 0; j <= J; ++j) {
    const double jitter = (j == 0 || j == J) ? 0.0 : 0.3 * u(rng);
    const double th = std::numbers::pi * (0.5 - (j + jitter) / J);
    const double rad = 1.0 + amp * u(rng);
    nodes.push_back({rad * std::cos(th), rad * std::sin(th)});
  }
  nodes.front().r = 0.0;
  nodes.back().r = 0.0;
  return PolygonalCurve(Topology::Open, std::move(nodes));
}

/// Regular polygon inscribed in the circle (c, rho), clockwise from the top.
inline PolygonalCurve regular_polygon(Vec2 c, double rho, std::size_t J) {
  std::vector<Vec2> nodes;
  for (std::size_t j = 0; j < J; ++j) {
    const double th = std::numbers::pi / 2 - 2.0 * std::numbers::pi * j / J;
    nodes.push_back({c.r + rho * std::cos(th), c.z + rho * std::sin(th)});
  }
  return PolygonalCurve(Topology::Periodic, std::move(nodes));
}

inline double rate(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace wilflow::testing
