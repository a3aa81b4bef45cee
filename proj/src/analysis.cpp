#include "wilflow/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "wilflow/simulation.hpp"

namespace wilflow {

using std::numbers::pi;

double sphere_implicit_residual(double r, double t, const SphereExact &p) {
  const double k = p.kbar;
  if (k == 0.0) return r - p.r0;
  const double z0 = p.r0 + 2.0 / k;
  if (std::abs(z0) <= 1e-15 * std::max(1.0, p.r0)) return r - p.r0;  // fixed point
  const double z = r + 2.0 / k;
  return 0.5 * (z * z - z0 * z0) - 4.0 / k * (z - z0) + 4.0 / (k * k) * std::log(z / z0) +
         k * k * t;
}

double sphere_energy(double r, double kbar) {
  const double a = 2.0 + kbar * r;
  return 2.0 * pi * a * a;
}

double sphere_radius(double t, const SphereExact &p) {
  if (!(t >= 0.0)) throw std::domain_error("sphere_radius: t must be nonnegative");
  if (!(p.r0 > 0.0)) throw std::domain_error("sphere_radius: r0 must be positive");
  const double k = p.kbar;
  if (k == 0.0 || t == 0.0) return p.r0;
  const double z0 = p.r0 + 2.0 / k;
  if (std::abs(z0) <= 1e-15 * std::max(1.0, p.r0)) return p.r0;  // at the fixed point

  auto F = [&](double z) {
    return 0.5 * (z * z - z0 * z0) - 4.0 / k * (z - z0) + 4.0 / (k * k) * std::log(z / z0) +
           k * k * t;
  };
  auto dF = [&](double z) {
    const double r = z - 2.0 / k;
    return r * r / z;
  };

  // z moves monotonically from z0 towards 0 (kbar < 0, fixed point r = -2/kbar)
  // or towards 2/kbar, where the radius vanishes (kbar > 0).
  const double z_end = k < 0.0 ? 0.0 : 2.0 / k;
  if (k > 0.0 && F(z_end) >= 0.0)
    throw std::domain_error("sphere_radius: sphere has collapsed before t");
  // F(z0) = kbar^2 t > 0; orient the bracket so that F(a) > 0 > F(b)
  double a = z0;
  double b = z_end;
  double z = z0;
  for (int it = 0; it < 400; ++it) {
    const double f = F(z);
    if (f == 0.0) break;
    if (f > 0.0) a = z; else b = z;
    double next = z - f / dF(z);
    const double blo = std::min(a, b), bhi = std::max(a, b);
    if (!(next > blo && next < bhi)) next = 0.5 * (a + b);
    if (std::abs(next - z) <= 1e-16 * std::max(1.0, std::abs(z))) {
      z = next;
      break;
    }
    z = next;
  }
  return z - 2.0 / k;
}

void SphereErrorTracker::add(double t, const PolygonalCurve &X,
                             std::span<const double> varkappa, double energy) {
  const double r = sphere_radius(t, exact_);
  const double vk = -2.0 / r;
  const std::size_t first = X.is_open() ? 1 : 0;
  for (std::size_t j = first; j < X.num_nodes(); ++j) {
    err_.x_err = std::max(err_.x_err, std::abs(norm(X[j]) - r));
    err_.varkappa_err = std::max(err_.varkappa_err, std::abs(varkappa[j] - vk));
  }
  err_.energy_err = std::max(err_.energy_err, std::abs(energy - sphere_energy(r, exact_.kbar)));
}

ErrorTriple sphere_errors(std::span<const StepRecord> run, const SphereExact &exact) {
  SphereErrorTracker tracker(exact);
  for (const auto &rec : run) tracker.add(rec.t, rec.X, rec.varkappa, rec.energy);
  return tracker.errors();
}

double manifold_distance(const PolygonalCurve &poly, Vec2 center, double radius) {
  if (poly.is_open()) throw std::domain_error("manifold_distance: polygon must be closed");
  const std::size_t n = poly.num_nodes();
  // star-shapedness: the angle about the center advances monotonically
  // and winds exactly once
  double winding = 0.0;
  int sign = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 a = poly[j] - center, b = poly[(j + 1) % n] - center;
    const double c = cross(a, b);
    const int s = c > 0.0 ? 1 : (c < 0.0 ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign))
      throw std::domain_error("manifold_distance: polygon is not star-shaped about the center");
    sign = s;
    winding += std::atan2(c, dot(a, b));
  }
  if (std::abs(std::abs(winding) - 2.0 * pi) > 1e-8)
    throw std::domain_error("manifold_distance: polygon does not wind once around the center");

  const double rho2 = radius * radius;
  auto piece = [&](const Vec2 &p, const Vec2 &q) {
    const double tri = 0.5 * std::abs(cross(p, q));
    const double sector = 0.5 * rho2 * std::abs(std::atan2(cross(p, q), dot(p, q)));
    return std::abs(tri - sector);
  };

  double md = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const Vec2 a = poly[j] - center, b = poly[(j + 1) % n] - center;
    const Vec2 d = b - a;
    // |a + s d|^2 = rho^2  <=>  |d|^2 s^2 + 2 (a.d) s + |a|^2 - rho^2 = 0
    const double qa = dot(d, d), qb = dot(a, d), qc = dot(a, a) - rho2;
    double cuts[2];
    int ncut = 0;
    const double disc = qb * qb - qa * qc;
    if (disc > 0.0) {
      const double sq = std::sqrt(disc);
      // numerically stable pair of roots
      const double t1 = qb >= 0.0 ? (-qb - sq) / qa : qc / (-qb + sq);
      const double t2 = qb >= 0.0 ? qc / (-qb - sq) : (-qb + sq) / qa;
      for (double s : {std::min(t1, t2), std::max(t1, t2)})
        if (s > 0.0 && s < 1.0) cuts[ncut++] = s;
    }
    Vec2 from = a;
    for (int c = 0; c < ncut; ++c) {
      const Vec2 to = a + cuts[c] * d;
      md += piece(from, to);
      from = to;
    }
    md += piece(from, b);
  }
  return md;
}

std::vector<std::optional<double>> eoc(std::span<const double> errors, std::span<const double> h) {
  if (errors.size() != h.size() || errors.size() < 2)
    throw std::invalid_argument("eoc: need matching error and h lists of length >= 2");
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!(h[k] > 0.0)) throw std::invalid_argument("eoc: h must be positive");
    if (k > 0 && !(h[k] < h[k - 1])) throw std::invalid_argument("eoc: h must decrease");
    if (!(errors[k] >= 0.0)) throw std::invalid_argument("eoc: errors must be nonnegative");
  }
  std::vector<std::optional<double>> out;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (errors[k] == 0.0 || errors[k - 1] == 0.0) {
      out.emplace_back();
      continue;
    }
    out.emplace_back(std::log(errors[k - 1] / errors[k]) / std::log(h[k - 1] / h[k]));
  }
  return out;
}

StudyKind study_from_string(const std::string &s) {
  if (s == "sphere-linear") return StudyKind::SphereLinear;
  if (s == "sphere-nonlinear") return StudyKind::SphereNonlinear;
  if (s == "torus") return StudyKind::CliffordTorus;
  throw std::invalid_argument("unknown study kind '" + s +
                              "' (expected sphere-linear, sphere-nonlinear or torus)");
}

const char *to_string(StudyKind k) {
  switch (k) {
    case StudyKind::SphereLinear: return "sphere-linear";
    case StudyKind::SphereNonlinear: return "sphere-nonlinear";
    case StudyKind::CliffordTorus: return "torus";
  }
  return "?";
}

std::vector<std::optional<double>> ConvergenceTable::eoc_of(std::size_t metric) const {
  if (rows.size() < 2) return {};
  std::vector<double> e, h;
  for (const auto &r : rows) {
    e.push_back(r.errors[metric]);
    h.push_back(r.h);
  }
  return eoc(e, h);
}

namespace {

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ConvergenceRow run_level(StudyKind kind, std::size_t level, const StudyOptions &opt) {
  const double scale = std::pow(2.0, static_cast<double>(level));
  RunConfig cfg;
  cfg.J = static_cast<std::size_t>(std::llround(1.0 / (opt.h0 / scale)));
  cfg.dt = opt.dt0 / (scale * scale);
  cfg.T = opt.T;
  cfg.eps = opt.eps;

  ConvergenceRow row;
  row.J = cfg.J;
  row.h = 1.0 / static_cast<double>(cfg.J);
  row.dt = cfg.dt;
  const auto start = std::chrono::steady_clock::now();

  if (kind == StudyKind::CliffordTorus) {
    const Vec2 c{std::numbers::sqrt2, 0.0};
    cfg.shape = TorusCircle{std::numbers::sqrt2, 1.0};
    cfg.kbar = 0.0;
    cfg.scheme = SchemeKind::Linear;
    double x_err = 0.0, e_err = 0.0;
    const double e_ref = 4.0 * pi * pi;
    auto out = run_simulation(cfg, [&](const SchemeState &st, const StepReport &rep) {
      for (const Vec2 &p : st.Xm.nodes()) x_err = std::max(x_err, std::abs(norm(p - c) - 1.0));
      e_err = std::max(e_err, std::abs(rep.energy(SchemeKind::Linear) - e_ref));
      row.max_picard_iters = std::max(row.max_picard_iters, rep.picard_iters);
    });
    if (out.termination != Termination::Completed)
      throw std::runtime_error(std::string("convergence run failed: ") + out.message);
    row.errors = {x_err, manifold_distance(out.final_state.Xm, c, 1.0), e_err};
    row.max_residual = out.max_residual;
    row.max_stability_defect = out.max_stability_defect;
  } else {
    const SphereExact exact{-1.0, 1.0};
    cfg.shape = Semicircle{exact.r0};
    cfg.kbar = exact.kbar;
    cfg.scheme = kind == StudyKind::SphereLinear ? SchemeKind::Linear : SchemeKind::Nonlinear;
    SphereErrorTracker tracker(exact);
    auto out = run_simulation(cfg, [&](const SchemeState &st, const StepReport &rep) {
      tracker.add(st.t, st.Xm, st.varkappa, rep.energy(cfg.scheme));
      row.max_picard_iters = std::max(row.max_picard_iters, rep.picard_iters);
    });
    if (out.termination != Termination::Completed)
      throw std::runtime_error(std::string("convergence run failed: ") + out.message);
    const auto &e = tracker.errors();
    row.errors = {e.x_err, e.varkappa_err, e.energy_err};
    row.max_residual = out.max_residual;
    row.max_stability_defect = out.max_stability_defect;
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

}  // namespace

std::string ConvergenceTable::to_csv() const {
  std::ostringstream os;
  os << "level,J,h,dt";
  for (const auto &m : metrics) os << ',' << m << ',' << m << "_eoc";
  os << '\n';
  std::vector<std::vector<std::optional<double>>> rates;
  for (std::size_t k = 0; k < metrics.size(); ++k) rates.push_back(eoc_of(k));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    os << i << ',' << rows[i].J << ',' << fmt("%.17g", rows[i].h) << ','
       << fmt("%.17g", rows[i].dt);
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      os << ',' << fmt("%.17g", rows[i].errors[k]) << ',';
      if (i > 0 && rates[k][i - 1]) os << fmt("%.17g", *rates[k][i - 1]);
    }
    os << '\n';
  }
  return os.str();
}

std::string ConvergenceTable::to_text() const {
  std::ostringstream os;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-18s", "(h, dt)");
  os << buf;
  for (const auto &m : metrics) {
    std::snprintf(buf, sizeof buf, "  %12s  %5s", m.c_str(), "EOC");
    os << buf;
  }
  os << '\n';
  std::vector<std::vector<std::optional<double>>> rates;
  for (std::size_t k = 0; k < metrics.size(); ++k) rates.push_back(eoc_of(k));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::snprintf(buf, sizeof buf, "(1/%zu, %.3g)", rows[i].J, rows[i].dt);
    std::string label = buf;
    std::snprintf(buf, sizeof buf, "%-18s", label.c_str());
    os << buf;
    for (std::size_t k = 0; k < metrics.size(); ++k) {
      std::string rate = "--";
      if (i > 0 && rates[k][i - 1]) rate = fmt("%.2f", *rates[k][i - 1]);
      std::snprintf(buf, sizeof buf, "  %12.2E  %5s", rows[i].errors[k], rate.c_str());
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

ConvergenceTable convergence_study(StudyKind kind, std::size_t levels,
                                   const StudyOptions &options) {
  if (levels == 0 || levels > 5)
    throw std::invalid_argument("convergence_study: levels must be between 1 and 5");
  ConvergenceTable table{kind, {}, std::vector<ConvergenceRow>(levels)};
  table.metrics = kind == StudyKind::CliffordTorus
                      ? std::vector<std::string>{"X_inf", "X_MD", "E_inf"}
                      : std::vector<std::string>{"X_inf", "varkappa_inf", "E_inf"};

  const unsigned workers = std::clamp<unsigned>(options.threads, 1u, static_cast<unsigned>(levels));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(levels);
  auto work = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < levels;) {
      try {
        table.rows[k] = run_level(kind, k, options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto &t : pool) t.join();
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
  return table;
}

}  // namespace wilflow
