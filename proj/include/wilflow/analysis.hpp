#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wilflow/geometry.hpp"
#include "wilflow/schemes.hpp"

namespace wilflow {

/// Sphere of radius r(t) with r' = -(kbar / r)(2 / r + kbar), r(0) = r0.
struct SphereExact {
  double kbar = -1.0;
  double r0 = 1.0;
};

/// r(t), from the closed-form implicit relation for z = r + 2/kbar
///   (z^2 - z0^2)/2 - 4/kbar (z - z0) + 4/kbar^2 ln(z/z0) + kbar^2 t = 0
/// solved by safeguarded Newton. Throws std::domain_error when the sphere
/// has collapsed before t (kbar > 0) or t < 0.
double sphere_radius(double t, const SphereExact &params);
/// Residual of the implicit relation at radius r and time t.
double sphere_implicit_residual(double r, double t, const SphereExact &params);
/// Energy of a sphere of radius r: 2 pi (2 + kbar r)^2.
double sphere_energy(double r, double kbar);

struct ErrorTriple {
  double x_err = 0.0;
  double varkappa_err = 0.0;
  double energy_err = 0.0;
};

/// One time level of a run: t_m, X^m, varkappa^m and the scheme energy E^m.
struct StepRecord {
  double t = 0.0;
  PolygonalCurve X;
  std::vector<double> varkappa;
  double energy = 0.0;
};

/// Sup-in-time error norms against the exact sphere, accumulated one time
/// level at a time. Node 0 is excluded, as in the reference error tables.
class SphereErrorTracker {
 public:
  explicit SphereErrorTracker(SphereExact exact) : exact_(exact) {}
  void add(double t, const PolygonalCurve &X, std::span<const double> varkappa, double energy);
  const ErrorTriple &errors() const { return err_; }

 private:
  SphereExact exact_;
  ErrorTriple err_;
};

ErrorTriple sphere_errors(std::span<const StepRecord> run, const SphereExact &exact);

/// Area of the symmetric difference between a closed polygon that is
/// star-shaped about `center` and the circle (center, radius):
///   1/2 int_0^{2 pi} |R(theta)^2 - radius^2| d theta,
/// integrated exactly piece by piece between polygon vertices and the
/// polygon/circle crossings. Throws std::domain_error if the polygon is not
/// star-shaped about the center.
double manifold_distance(const PolygonalCurve &poly, Vec2 center, double radius);

/// EOC_k = ln(e_{k-1}/e_k) / ln(h_{k-1}/h_k); empty when an error is zero.
std::vector<std::optional<double>> eoc(std::span<const double> errors,
                                       std::span<const double> h);

enum class StudyKind { SphereLinear, SphereNonlinear, CliffordTorus };

StudyKind study_from_string(const std::string &s);
const char *to_string(StudyKind k);

struct ConvergenceRow {
  std::size_t J = 0;
  double h = 0.0;
  double dt = 0.0;
  std::vector<double> errors;  ///< one per metric
  std::size_t max_picard_iters = 0;
  double max_residual = 0.0;
  double max_stability_defect = 0.0;
  double seconds = 0.0;
};

struct ConvergenceTable {
  StudyKind kind;
  std::vector<std::string> metrics;
  std::vector<ConvergenceRow> rows;

  /// EOC of one metric between consecutive rows (rows.size() - 1 entries).
  std::vector<std::optional<double>> eoc_of(std::size_t metric) const;
  std::string to_csv() const;
  std::string to_text() const;
};

struct StudyOptions {
  double eps = 0.1;
  double h0 = 1.0 / 32.0;
  double dt0 = 0.04;
  double T = 1.0;
  unsigned threads = 1;
};

/// Runs levels k = 0..levels-1 with (h0 / 2^k, dt0 / 4^k). Sphere studies
/// use kbar = -1, r0 = 1; the torus study uses kbar = 0 and the circle
/// (sqrt 2, 0) of radius 1 with the linear scheme. Levels run concurrently
/// when threads > 1.
ConvergenceTable convergence_study(StudyKind kind, std::size_t levels,
                                   const StudyOptions &options = {});

}  // namespace wilflow
