#include "wilflow/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "wilflow/fe_systems.hpp"
#include "wilflow/quadrature.hpp"

namespace wilflow {

const char *to_string(SchemeKind k) { return k == SchemeKind::Linear ? "linear" : "nonlinear"; }

SchemeKind scheme_from_string(const std::string &s) {
  if (s == "linear") return SchemeKind::Linear;
  if (s == "nonlinear") return SchemeKind::Nonlinear;
  throw std::invalid_argument("unknown scheme '" + s + "'");
}

SchemeState SchemeState::initial(const InitialData &data) {
  return {data.X0, data.X0, data.varkappa0, data.kappa0, 0.0, 0};
}

double StepReport::max_residual() const {
  double r = 0.0;
  for (double v : residuals) r = std::max(r, v);
  return r;
}

SqrtJField sqrt_jm(const PolygonalCurve &Xm, const PolygonalCurve &Xm_prev) {
  const auto rule = QuadratureRule::gauss2();
  SqrtJField out;
  out.values.resize(Xm.num_elements());
  for (std::size_t e = 0; e < Xm.num_elements(); ++e) {
    const std::size_t p = Xm.left(e), q = Xm.right(e);
    const double len = norm(Xm.segment(e));
    const double len_prev = norm(Xm_prev.segment(e));
    for (std::size_t k = 0; k < 2; ++k) {
      const double s = rule.points[k];
      const double r = Xm[p].r + s * (Xm[q].r - Xm[p].r);
      const double r_prev = Xm_prev[p].r + s * (Xm_prev[q].r - Xm_prev[p].r);
      const double J = (r_prev * len_prev) / (r * len);
      if (!(J > 0.0))
        throw DegenerateMesh("sqrt_jm: nonpositive J^m at element " + std::to_string(e));
      out.values[e][k] = std::sqrt(J);
    }
  }
  return out;
}

double dissipation(const PolygonalCurve &X, std::span<const double> V, double dt) {
  const auto rule = QuadratureRule::gauss3();
  double sum = 0.0;
  for (std::size_t e = 0; e < X.num_elements(); ++e) {
    const std::size_t p = X.left(e), q = X.right(e);
    sum += element_ip([&](std::size_t, double s) { return X[p].r + s * (X[q].r - X[p].r); },
                      [&](std::size_t, double s) {
                        const double v = V[p] + s * (V[q] - V[p]);
                        return v * v;
                      },
                      rule, norm(X.segment(e)));
  }
  return 2.0 * std::numbers::pi * dt * sum;
}

namespace {

constexpr std::size_t kV = 0, kVk = 1;

// Time-derivative / transport data that differs between the two schemes.
struct LinearTerms {
  const SqrtJField *sqrt_j;
  const PolygonalCurve *X_prev;  // X^{m-1}
};
struct PicardTerms {
  const PolygonalCurve *X_iter;  // X^{m+1,l}
};

struct FlowSolution {
  std::vector<double> V;
  std::vector<double> varkappa;
  double residual;
};

// Assembles and solves the (V, varkappa) system of one step. Rows of the
// varkappa-equation are multiplied by dt.
FlowSolution solve_flow_system(const SchemeState &st, const std::vector<ElementFrame> &frames,
                               const SchemeParams &par, const LinearTerms *lin,
                               const PicardTerms *pic) {
  const PolygonalCurve &X = st.Xm;
  const NodeLayout layout(X, 2);
  BorderedBandMatrix A = layout.make_matrix();
  std::vector<double> rhs(layout.size(), 0.0);
  const double dt = par.dt, kbar = par.kbar;
  const auto g3 = QuadratureRule::gauss3();
  const auto g2 = QuadratureRule::gauss2();

  for (std::size_t e = 0; e < X.num_elements(); ++e) {
    const std::size_t nd[2] = {X.left(e), X.right(e)};
    const double L = frames[e].len;
    const double nu_r = frames[e].nu.r;
    const Vec2 tau = frames[e].tau;
    const double r_n[2] = {X[nd[0]].r, X[nd[1]].r};
    const double k_n[2] = {st.kappa[nd[0]], st.kappa[nd[1]]};
    const double vk_n[2] = {st.varkappa[nd[0]], st.varkappa[nd[1]]};

    // tangential transport velocity (X^new - X^old) . tau^m / dt at the nodes
    double wt_n[2] = {0.0, 0.0};
    double de1_n[2] = {0.0, 0.0};   // Picard: (X^l - X^m) . e1 / dt
    double stretch_coef = 0.0;      // Picard: r-weight of the stretching term
    double len_iter = 0.0;
    if (lin) {
      for (int a = 0; a < 2; ++a)
        wt_n[a] = dot(X[nd[a]] - (*lin->X_prev)[nd[a]], tau) / dt;
    } else {
      const PolygonalCurve &Xl = *pic->X_iter;
      for (int a = 0; a < 2; ++a) {
        const Vec2 d = Xl[nd[a]] - X[nd[a]];
        wt_n[a] = dot(d, tau) / dt;
        de1_n[a] = d.r / dt;
      }
      const Vec2 al = Xl.segment(e);
      len_iter = norm(al);
      stretch_coef = dot(al - X.segment(e), al) / (dt * L);
    }

    auto add = [&](std::size_t i, std::size_t ci, std::size_t j, std::size_t cj, double v) {
      A.add(layout.index(i, ci), layout.index(j, cj), v);
    };

    for (std::size_t q = 0; q < g3.size(); ++q) {
      const double s = g3.points[q], w = g3.weights[q];
      const double N[2] = {1.0 - s, s};
      const double dN[2] = {-1.0, 1.0};
      const double r = r_n[0] * N[0] + r_n[1] * N[1];
      const double kap = k_n[0] * N[0] + k_n[1] * N[1];
      const double vk = vk_n[0] * N[0] + vk_n[1] * N[1];
      const double wt = wt_n[0] * N[0] + wt_n[1] * N[1];

      const double mass = w * r * L;
      const double stiff = w * r / L;
      const double react = w * L * (2.0 * nu_r * kap + 0.5 * r * (vk + kbar) * vk);
      const double conv = w * r * wt;
      double transport = 0.0;  // Picard: coefficient of (varkappa - kbar) chi
      if (pic) {
        const double de1 = de1_n[0] * N[0] + de1_n[1] * N[1];
        transport = 0.5 * w * (de1 * len_iter + r * stretch_coef);
      }

      for (int a = 0; a < 2; ++a) {
        const std::size_t i = nd[a];
        rhs[layout.index(i, kV)] += react * kbar * N[a];
        rhs[layout.index(i, kVk)] += dt * (0.5 * conv * kbar * dN[a] + transport * kbar * N[a]);
        if (pic) rhs[layout.index(i, kVk)] += mass * vk * N[a];
        for (int b = 0; b < 2; ++b) {
          const std::size_t j = nd[b];
          add(i, kV, j, kV, mass * N[a] * N[b]);
          add(i, kV, j, kVk, -stiff * dN[a] * dN[b] + react * N[a] * N[b]);
          add(i, kVk, j, kV, dt * (stiff * dN[a] * dN[b] - react * N[a] * N[b]));
          add(i, kVk, j, kVk,
              dt * (-0.5 * conv * (dN[b] * N[a] - N[b] * dN[a]) + transport * N[a] * N[b]));
          if (pic) add(i, kVk, j, kVk, mass * N[a] * N[b]);
        }
      }
    }

    if (lin) {
      // time derivative with the degree-3-exact rule and sqrt(J^m)
      for (std::size_t q = 0; q < g2.size(); ++q) {
        const double s = g2.points[q], w = g2.weights[q];
        const double N[2] = {1.0 - s, s};
        const double r = r_n[0] * N[0] + r_n[1] * N[1];
        const double vk = vk_n[0] * N[0] + vk_n[1] * N[1];
        const double mass = w * r * L;
        const double sj = lin->sqrt_j->values[e][q];
        for (int a = 0; a < 2; ++a) {
          const std::size_t i = nd[a];
          rhs[layout.index(i, kVk)] += mass * (kbar + (vk - kbar) * sj) * N[a];
          for (int b = 0; b < 2; ++b) add(i, kVk, nd[b], kVk, mass * N[a] * N[b]);
        }
      }
    }
  }

  try {
    A.factor();
  } catch (const SingularSystem &ex) {
    throw WellPosednessViolation(std::string("velocity/mean-curvature system singular: ") +
                                 ex.what());
  }
  const auto sol = A.solve(rhs);
  FlowSolution out{std::vector<double>(X.num_nodes()), std::vector<double>(X.num_nodes()),
                   sol.residual};
  for (std::size_t i = 0; i < X.num_nodes(); ++i) {
    out.V[i] = sol.x[layout.index(i, kV)];
    out.varkappa[i] = sol.x[layout.index(i, kVk)];
  }
  return out;
}

std::vector<double> scaled_velocity_load(const PolygonalCurve &X, std::span<const double> V,
                                         double dt) {
  auto load = weighted_load(X, V);
  for (double &v : load) v *= dt;
  return load;
}

}  // namespace

std::pair<SchemeState, StepReport> step_linear(const SchemeState &state,
                                               const SchemeParams &params) {
  const auto sj = sqrt_jm(state.Xm, state.Xm_prev);
  PositionSystem position(state.Xm);
  const LinearTerms lin{&sj, &state.Xm_prev};
  auto flow = solve_flow_system(state, position.frames(), params, &lin, nullptr);
  auto pos = position.solve(scaled_velocity_load(state.Xm, flow.V, params.dt));

  StepReport rep;
  rep.energy_before = discrete_energy(state.Xm_prev, state.varkappa, params.kbar);
  rep.energy_linear = discrete_energy(state.Xm, flow.varkappa, params.kbar);
  rep.energy_nonlinear = discrete_energy(pos.X, flow.varkappa, params.kbar);
  rep.dissipation = dissipation(state.Xm, flow.V, params.dt);
  rep.residuals = {flow.residual, pos.residual};
  rep.V = std::move(flow.V);

  SchemeState next{std::move(pos.X), state.Xm, std::move(flow.varkappa), std::move(pos.kappa),
                   state.t + params.dt, state.step + 1};
  return {std::move(next), std::move(rep)};
}

std::pair<SchemeState, StepReport> step_nonlinear(const SchemeState &state,
                                                  const SchemeParams &params, double tol,
                                                  std::size_t max_iters) {
  PositionSystem position(state.Xm);
  PolygonalCurve X_iter = state.Xm;
  std::vector<double> vk_iter = state.varkappa;
  StepReport rep;

  for (std::size_t it = 1; it <= max_iters; ++it) {
    const PicardTerms pic{&X_iter};
    auto flow = solve_flow_system(state, position.frames(), params, nullptr, &pic);
    auto pos = position.solve(scaled_velocity_load(state.Xm, flow.V, params.dt));
    rep.residuals.push_back(flow.residual);
    rep.residuals.push_back(pos.residual);

    double change = 0.0;
    for (std::size_t j = 0; j < X_iter.num_nodes(); ++j) {
      change = std::max(change, norm(pos.X[j] - X_iter[j]));
      change = std::max(change, std::abs(flow.varkappa[j] - vk_iter[j]));
    }
    X_iter = std::move(pos.X);
    vk_iter = std::move(flow.varkappa);

    if (change <= tol) {
      rep.picard_iters = it;
      rep.energy_before = discrete_energy(state.Xm, state.varkappa, params.kbar);
      rep.energy_linear = discrete_energy(state.Xm, vk_iter, params.kbar);
      rep.energy_nonlinear = discrete_energy(X_iter, vk_iter, params.kbar);
      rep.dissipation = dissipation(state.Xm, flow.V, params.dt);
      rep.V = std::move(flow.V);
      SchemeState next{std::move(X_iter), state.Xm, std::move(vk_iter), std::move(pos.kappa),
                       state.t + params.dt, state.step + 1};
      return {std::move(next), std::move(rep)};
    }
    if (!std::isfinite(change)) break;
  }
  throw PicardDivergence("Picard iteration did not converge within " +
                         std::to_string(max_iters) + " iterations");
}

}  // namespace wilflow
