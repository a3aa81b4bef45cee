#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wilflow/geometry.hpp"
#include "wilflow/initialization.hpp"

namespace wilflow {

enum class SchemeKind { Linear, Nonlinear };

const char *to_string(SchemeKind k);
SchemeKind scheme_from_string(const std::string &s);

/// Everything one time step needs. X^{-1} = X^0 at step 0.
struct SchemeState {
  PolygonalCurve Xm;
  PolygonalCurve Xm_prev;
  std::vector<double> varkappa;
  std::vector<double> kappa;
  double t = 0.0;
  std::size_t step = 0;

  static SchemeState initial(const InitialData &data);
};

struct StepReport {
  std::vector<double> V;
  double energy_linear = 0.0;     ///< E(X^m, varkappa^{m+1})
  double energy_nonlinear = 0.0;  ///< E(X^{m+1}, varkappa^{m+1})
  /// Right-hand side of the stability estimate: E(X^{m-1}, varkappa^m) for
  /// the linear scheme, E(X^m, varkappa^m) for the nonlinear one.
  double energy_before = 0.0;
  double dissipation = 0.0;  ///< 2 pi dt (X^m.e1 V^2, |X^m_rho|)
  std::size_t picard_iters = 0;
  std::vector<double> residuals;

  /// Energy the scheme dissipates: energy_linear or energy_nonlinear.
  double energy(SchemeKind kind) const {
    return kind == SchemeKind::Linear ? energy_linear : energy_nonlinear;
  }
  /// energy(kind) + dissipation - energy_before; <= 0 up to round-off.
  double stability_defect(SchemeKind kind) const {
    return energy(kind) + dissipation - energy_before;
  }
  double max_residual() const;
};

/// sqrt(J^m) at the two Gauss points of every element.
struct SqrtJField {
  std::vector<std::array<double, 2>> values;
};

/// J^m = (X^{m-1}.e1 |X^{m-1}_rho|) / (X^m.e1 |X^m_rho|). Throws
/// DegenerateMesh if J^m is not positive somewhere.
SqrtJField sqrt_jm(const PolygonalCurve &Xm, const PolygonalCurve &Xm_prev);

struct SchemeParams {
  double kbar = 0.0;
  double dt = 1e-3;
};

class PicardDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One step of the linear scheme: solves for (V, varkappa) and then for
/// (X, kappa). Throws WellPosednessViolation on a singular system.
std::pair<SchemeState, StepReport> step_linear(const SchemeState &state,
                                               const SchemeParams &params);

/// One step of the nonlinear scheme via Picard iteration on X^{m+1}.
/// Throws PicardDivergence if max(|dX|, |d varkappa|) > tol after max_iters.
std::pair<SchemeState, StepReport> step_nonlinear(const SchemeState &state,
                                                  const SchemeParams &params,
                                                  double tol = 1e-10,
                                                  std::size_t max_iters = 100);

/// 2 pi dt (X.e1 V^2, |X_rho|).
double dissipation(const PolygonalCurve &X, std::span<const double> V, double dt);

}  // namespace wilflow
