#include "wilflow/fe_systems.hpp"

#include "wilflow/quadrature.hpp"

namespace wilflow {

NodeLayout::NodeLayout(const PolygonalCurve &curve, std::size_t block)
    : nodes_(curve.num_nodes()), block_(block), periodic_(!curve.is_open()) {}

namespace {
constexpr std::size_t kR = 0, kZ = 1, kK = 2;
}

PositionSystem::PositionSystem(const PolygonalCurve &Xm)
    : Xm_(Xm), frames_(element_frames(Xm)), normals_(vertex_normals(Xm, frames_)),
      weights_(lumped_weights(Xm)), layout_(Xm, 3), matrix_(layout_.make_matrix()) {
  const std::size_t n = Xm.num_nodes();
  auto eliminated = [&](std::size_t node, std::size_t comp) {
    return comp == kR && Xm.is_boundary_node(node);
  };

  for (std::size_t e = 0; e < Xm.num_elements(); ++e) {
    const std::size_t nodes[2] = {Xm.left(e), Xm.right(e)};
    const double inv_len = 1.0 / frames_[e].len;
    for (std::size_t a = 0; a < 2; ++a) {
      const std::size_t i = nodes[a];
      for (std::size_t comp : {kR, kZ}) {
        if (eliminated(i, comp)) continue;
        for (std::size_t b = 0; b < 2; ++b) {
          const std::size_t j = nodes[b];
          if (eliminated(j, comp)) continue;
          matrix_.add(layout_.index(i, comp), layout_.index(j, comp),
                      (a == b ? 1.0 : -1.0) * inv_len);
        }
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 wn = weights_[i] * normals_.omega[i];
    // curvature columns of the two position rows
    if (!eliminated(i, kR)) matrix_.add(layout_.index(i, kR), layout_.index(i, kK), wn.r);
    matrix_.add(layout_.index(i, kZ), layout_.index(i, kK), wn.z);
    // normal-displacement row
    if (!eliminated(i, kR)) matrix_.add(layout_.index(i, kK), layout_.index(i, kR), wn.r);
    matrix_.add(layout_.index(i, kK), layout_.index(i, kZ), wn.z);
    if (eliminated(i, kR)) matrix_.add(layout_.index(i, kR), layout_.index(i, kR), 1.0);
  }
  try {
    matrix_.factor();
  } catch (const SingularSystem &ex) {
    throw WellPosednessViolation(
        std::string("position/curvature system singular (vertex normals vanish or span "
                    "less than two directions): ") +
        ex.what());
  }
}

PositionSystem::Result PositionSystem::solve(std::span<const double> normal_increment) const {
  const std::size_t n = Xm_.num_nodes();
  std::vector<double> rhs(layout_.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i)
    rhs[layout_.index(i, kK)] =
        weights_[i] * dot(normals_.omega[i], Xm_[i]) + normal_increment[i];
  auto sol = matrix_.solve(rhs);

  std::vector<Vec2> x(n);
  Result out;
  out.kappa.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = {sol.x[layout_.index(i, kR)], sol.x[layout_.index(i, kZ)]};
    out.kappa[i] = sol.x[layout_.index(i, kK)];
  }
  if (Xm_.is_open()) {
    x.front().r = 0.0;
    x.back().r = 0.0;
  }
  out.X = PolygonalCurve(Xm_.topology(), std::move(x));
  out.residual = sol.residual;
  return out;
}

std::vector<double> weighted_load(const PolygonalCurve &X, std::span<const double> f) {
  // int_e (f_p N0 + f_q N1) N_a |a_e| ds = |a_e| (f_a / 3 + f_other / 6)
  std::vector<double> load(X.num_nodes(), 0.0);
  for (std::size_t e = 0; e < X.num_elements(); ++e) {
    const std::size_t p = X.left(e), q = X.right(e);
    const double len = norm(X.segment(e));
    load[p] += len * (f[p] / 3.0 + f[q] / 6.0);
    load[q] += len * (f[q] / 3.0 + f[p] / 6.0);
  }
  return load;
}

}  // namespace wilflow
