#include "wilflow/initialization.hpp"

#include <numbers>

#include "wilflow/fe_systems.hpp"
#include "wilflow/quadrature.hpp"

namespace wilflow {

ProjectionResult bgn_project(const PolygonalCurve &Y0) {
  PositionSystem system(Y0);
  const std::vector<double> zero(Y0.num_nodes(), 0.0);
  auto res = system.solve(zero);
  return {std::move(res.X), std::move(res.kappa), res.residual};
}

std::vector<double> initial_mean_curvature(const PolygonalCurve &X0,
                                           std::span<const double> kappa0,
                                           const VertexNormals &omega0) {
  std::vector<double> vk(X0.num_nodes());
  for (std::size_t j = 0; j < vk.size(); ++j) {
    vk[j] = X0.is_boundary_node(j) ? 2.0 * kappa0[j]
                                   : kappa0[j] - omega0.omega[j].r / X0[j].r;
  }
  return vk;
}

InitialData make_initial_data(const PolygonalCurve &Y0) {
  auto proj = bgn_project(Y0);
  const auto frames = element_frames(proj.X0);
  const auto omega0 = vertex_normals(proj.X0, frames);
  auto vk = initial_mean_curvature(proj.X0, proj.kappa0, omega0);
  return {std::move(proj.X0), std::move(proj.kappa0), std::move(vk), proj.residual};
}

double discrete_energy(const PolygonalCurve &X, std::span<const double> varkappa, double kbar) {
  const auto rule = QuadratureRule::gauss3();
  double sum = 0.0;
  for (std::size_t e = 0; e < X.num_elements(); ++e) {
    const std::size_t p = X.left(e), q = X.right(e);
    const double rp = X[p].r, rq = X[q].r;
    const double dp = varkappa[p] - kbar, dq = varkappa[q] - kbar;
    sum += element_ip(
        [&](std::size_t, double s) { return rp + s * (rq - rp); },
        [&](std::size_t, double s) {
          const double d = dp + s * (dq - dp);
          return d * d;
        },
        rule, norm(X.segment(e)));
  }
  return std::numbers::pi * sum;
}

}  // namespace wilflow
