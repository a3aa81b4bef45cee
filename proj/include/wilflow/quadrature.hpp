#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "wilflow/geometry.hpp"

namespace wilflow {

enum class QuadratureKind { MassLumped, Gauss2, Gauss3 };

/// Quadrature on the unit reference element [0, 1]; weights sum to one.
struct QuadratureRule {
  QuadratureKind kind;
  std::span<const double> points;
  std::span<const double> weights;

  std::size_t size() const { return points.size(); }

  /// Trapezoid rule. Element-wise factors are taken from the element itself,
  /// i.e. as one-sided limits at the two endpoints.
  static QuadratureRule mass_lumped();
  /// Exact for polynomials of degree <= 3.
  static QuadratureRule gauss2();
  /// Exact for polynomials of degree <= 5.
  static QuadratureRule gauss3();
};

/// Contribution of one element to the inner product of f and g. The
/// providers are called with (quadrature point index, reference location)
/// and evaluate their factor on this element; `scale` is the element measure
/// the reference integral is multiplied by (h for d rho, |a| for ds).
template <class F, class G>
double element_ip(F &&f, G &&g, const QuadratureRule &rule, double scale) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    sum += rule.weights[q] * f(q, rule.points[q]) * g(q, rule.points[q]);
  return scale * sum;
}

/// w_j = half the lengths of the elements adjacent to node j.
std::vector<double> lumped_weights(const PolygonalCurve &curve);

}  // namespace wilflow
