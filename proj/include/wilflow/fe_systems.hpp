#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wilflow/banded_solver.hpp"
#include "wilflow/geometry.hpp"

namespace wilflow {

/// Interleaved unknown numbering: `block` scalar unknowns per node, nodes
/// consecutive. Periodic curves move node 0 to the end so that its couplings
/// with nodes 1 and J-1 become the border of a BorderedBandMatrix.
class NodeLayout {
 public:
  NodeLayout(const PolygonalCurve &curve, std::size_t block);

  std::size_t index(std::size_t node, std::size_t comp) const {
    const std::size_t pos = periodic_ ? (node == 0 ? nodes_ - 1 : node - 1) : node;
    return pos * block_ + comp;
  }
  std::size_t size() const { return nodes_ * block_; }
  std::size_t half_bandwidth() const { return 2 * block_ - 1; }
  std::size_t border() const { return periodic_ ? block_ : 0; }
  BorderedBandMatrix make_matrix() const {
    return BorderedBandMatrix(size(), half_bandwidth(), half_bandwidth(), border());
  }

 private:
  std::size_t nodes_;
  std::size_t block_;
  bool periodic_;
};

/// Mass-lumped position / curvature system on a fixed curve X^m:
///
///   (X . nu^m, xi |X^m_rho|)^h = (X^m . nu^m, xi |X^m_rho|)^h + g(xi)
///   (kappa nu^m, eta |X^m_rho|)^h + (X_rho, eta_rho |X^m_rho|^{-1}) = 0
///
/// for all nodal xi and all eta with eta . e1 = 0 at Open boundary nodes,
/// where X . e1 = 0 is imposed there. g is supplied per node (for the
/// schemes g(phi_i) = dt (V, phi_i |X^m_rho|); for the initial projection
/// g = 0). The matrix depends on X^m only and is factored once.
class PositionSystem {
 public:
  struct Result {
    PolygonalCurve X;
    std::vector<double> kappa;
    double residual = 0.0;
  };

  /// Throws WellPosednessViolation when the factorization breaks down.
  explicit PositionSystem(const PolygonalCurve &Xm);

  Result solve(std::span<const double> normal_increment) const;

  const std::vector<ElementFrame> &frames() const { return frames_; }
  const VertexNormals &normals() const { return normals_; }
  const std::vector<double> &weights() const { return weights_; }

 private:
  PolygonalCurve Xm_;
  std::vector<ElementFrame> frames_;
  VertexNormals normals_;
  std::vector<double> weights_;
  NodeLayout layout_;
  BorderedBandMatrix matrix_;
};

class WellPosednessViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (f, phi_i |X_rho|) for a nodal field f, exact.
std::vector<double> weighted_load(const PolygonalCurve &X, std::span<const double> f);

}  // namespace wilflow
