#pragma once

#include <span>
#include <vector>

#include "wilflow/geometry.hpp"

namespace wilflow {

struct InitialData {
  PolygonalCurve X0;
  std::vector<double> kappa0;     ///< in-plane curvature of the generating curve
  std::vector<double> varkappa0;  ///< mean curvature of the surface
  double residual = 0.0;          ///< relative residual of the projection solve
};

struct ProjectionResult {
  PolygonalCurve X0;
  std::vector<double> kappa0;
  double residual = 0.0;
};

/// Moves the nodes of Y0 tangentially (zero lumped normal velocity) and
/// computes the discrete curvature, i.e. one BGN step with V = 0.
ProjectionResult bgn_project(const PolygonalCurve &Y0);

/// varkappa = kappa - omega . e1 / (X . e1) at interior nodes and 2 kappa at
/// Open boundary nodes.
std::vector<double> initial_mean_curvature(const PolygonalCurve &X0,
                                           std::span<const double> kappa0,
                                           const VertexNormals &omega0);

/// bgn_project followed by initial_mean_curvature on the projected curve.
InitialData make_initial_data(const PolygonalCurve &Y0);

/// pi * int X.e1 (varkappa - kbar)^2 |X_rho| d rho, integrated exactly.
double discrete_energy(const PolygonalCurve &X, std::span<const double> varkappa, double kbar);

}  // namespace wilflow
