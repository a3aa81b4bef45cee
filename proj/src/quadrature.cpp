#include "wilflow/quadrature.hpp"

#include <cmath>

namespace wilflow {
namespace {

constexpr std::array<double, 2> kLumpedPoints{0.0, 1.0};
constexpr std::array<double, 2> kLumpedWeights{0.5, 0.5};

// 0.5 -+ sqrt(3)/6
constexpr std::array<double, 2> kGauss2Points{0.21132486540518711775, 0.78867513459481288225};
constexpr std::array<double, 2> kGauss2Weights{0.5, 0.5};

// 0.5 -+ sqrt(15)/10, 0.5
constexpr std::array<double, 3> kGauss3Points{0.11270166537925831148, 0.5,
                                              0.88729833462074168852};
constexpr std::array<double, 3> kGauss3Weights{5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

}  // namespace

QuadratureRule QuadratureRule::mass_lumped() {
  return {QuadratureKind::MassLumped, kLumpedPoints, kLumpedWeights};
}
QuadratureRule QuadratureRule::gauss2() {
  return {QuadratureKind::Gauss2, kGauss2Points, kGauss2Weights};
}
QuadratureRule QuadratureRule::gauss3() {
  return {QuadratureKind::Gauss3, kGauss3Points, kGauss3Weights};
}

std::vector<double> lumped_weights(const PolygonalCurve &curve) {
  std::vector<double> w(curve.num_nodes(), 0.0);
  for (std::size_t e = 0; e < curve.num_elements(); ++e) {
    const double half = 0.5 * norm(curve.segment(e));
    w[curve.left(e)] += half;
    w[curve.right(e)] += half;
  }
  return w;
}

}  // namespace wilflow
