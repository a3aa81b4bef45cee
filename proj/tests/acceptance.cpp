// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "wilflow/analysis.hpp"
#include "wilflow/initialization.hpp"
#include "wilflow/io.hpp"
#include "wilflow/quadrature.hpp"
#include "wilflow/schemes.hpp"
#include "wilflow/shapes.hpp"
#include "wilflow/simulation.hpp"

using namespace wilflow;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string &what) {
    if (!ok) {
      pass = false;
      detail += " FAILED(" + what + ")";
    }
  }
  void note(const char *fmt, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, v);
    detail += ' ';
    detail += buf;
  }
};

int failures = 0;

void report(const char *id, const char *title, const Verdict &v) {
  std::printf("[%s] %s %s:%s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

bool within_rel(double x, double target, double rel) {
  return std::abs(x - target) <= rel * std::abs(target);
}
bool within_abs(double x, double target, double tol) { return std::abs(x - target) <= tol; }

// Largest solver residual seen by any run in the suite (criterion 9).
double g_max_residual = 0.0;
void track_residual(double r) { g_max_residual = std::max(g_max_residual, r); }

struct RunResult {
  RunConfig config;
  RunOutput out;
  double seconds = 0.0;
  double max_rel_defect = -1e300;  // max over steps of defect / max(1, E_before)
};

RunResult run_tracked(const RunConfig &c) {
  RunResult res;
  res.config = c;
  const auto t0 = Clock::now();
  res.out = run_simulation(c, [&](const SchemeState &, const StepReport &rep) {
    res.max_rel_defect = std::max(res.max_rel_defect,
                                  rep.stability_defect(c.scheme) / std::max(1.0, rep.energy_before));
  });
  res.seconds = seconds_since(t0);
  return res;
}

bool energy_non_increasing(const RunOutput &out, double slack) {
  for (std::size_t k = 1; k < out.diagnostics.size(); ++k) {
    const double a = out.diagnostics[k - 1].energy, b = out.diagnostics[k].energy;
    if (b > a + slack * std::max(1.0, std::abs(a))) return false;
  }
  return true;
}

// ---------------------------------------------------------------- tables

void table_checks(Verdict &v, const ConvergenceTable &t, const double (*reference)[3],
                  std::size_t ref_rows, double eoc_lo, double eoc_hi) {
  for (std::size_t i = 0; i < ref_rows; ++i)
    for (std::size_t k = 0; k < 3; ++k)
      v.check(within_rel(t.rows[i].errors[k], reference[i][k], 0.10),
              t.metrics[k] + " level " + std::to_string(i));
  for (std::size_t k = 0; k < 3; ++k)
    for (const auto &r : t.eoc_of(k))
      v.check(r && *r >= eoc_lo && *r <= eoc_hi, "EOC " + t.metrics[k]);
  for (const auto &row : t.rows) track_residual(row.max_residual);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    char buf[160];
    std::snprintf(buf, sizeof buf, " J=%zu:(%.3e,%.3e,%.3e)", t.rows[i].J, t.rows[i].errors[0],
                  t.rows[i].errors[1], t.rows[i].errors[2]);
    v.detail += buf;
  }
}

void criterion_1() {
  const auto t0 = Clock::now();
  const auto t = convergence_study(StudyKind::SphereLinear, 3, {.threads = 3});
  const double secs = seconds_since(t0);
  const double reference[3][3] = {{4.75e-3, 3.53e-2, 9.55e-2},
                              {1.20e-3, 9.81e-3, 2.40e-2},
                              {3.11e-4, 2.53e-3, 6.09e-3}};
  Verdict v;
  table_checks(v, t, reference, 3, 1.8, 2.1);
  v.check(secs < 30.0, "runtime");
  v.note("runtime=%.1fs", secs);
  report("C1", "sphere convergence, linear scheme", v);
}

void criterion_2() {
  const auto t = convergence_study(StudyKind::SphereNonlinear, 3, {.threads = 3});
  const double reference[1][3] = {{1.52e-2, 2.73e-2, 2.37e-1}};
  Verdict v;
  table_checks(v, t, reference, 1, 1.85, 2.1);
  std::size_t iters = 0;
  for (const auto &r : t.rows) iters = std::max(iters, r.max_picard_iters);
  v.check(iters <= 50, "Picard iterations");
  v.note("max_picard=%.0f", double(iters));
  report("C2", "sphere convergence, nonlinear scheme", v);
}

void criterion_3() {
  const auto t = convergence_study(StudyKind::CliffordTorus, 3, {.threads = 3});
  const double reference[3][3] = {{8.14e-3, 3.05e-2, 7.77e-2},
                              {1.99e-3, 7.47e-3, 1.92e-2},
                              {4.98e-4, 1.86e-3, 4.81e-3}};
  Verdict v;
  table_checks(v, t, reference, 3, 1.9, 2.1);
  report("C3", "stationary torus convergence", v);
}

// ------------------------------------------------------------- stability

PolygonalCurve random_curve(std::mt19937 &rng, bool open, std::size_t J) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double amp = 0.05 + 0.15 * (u(rng) + 1.0) / 2.0;
  const int modes = 1 + int(3.0 * (u(rng) + 1.0));
  const double phase = pi * u(rng);
  std::vector<Vec2> nodes;
  const std::size_t n = open ? J + 1 : J;
  const double center = open ? 0.0 : 2.0 + (u(rng) + 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double jit = (open && (j == 0 || j == J)) ? 0.0 : 0.25 * u(rng);
    const double th = open ? pi * (0.5 - (j + jit) / J) : pi / 2 - 2.0 * pi * (j + jit) / J;
    const double rad = 1.0 + amp * std::sin(modes * th + phase);
    nodes.push_back({center + rad * std::cos(th), rad * std::sin(th)});
  }
  if (open) nodes.front().r = nodes.back().r = 0.0;
  return PolygonalCurve(open ? Topology::Open : Topology::Periodic, std::move(nodes));
}

void criterion_4(const std::map<std::string, RunResult> &shipped) {
  Verdict v;
  const double slack = 1e-9;
  // disc at the shipped step size and with dt inflated x10 and x100, both schemes
  std::vector<std::future<RunResult>> runs;
  for (double factor : {1.0, 10.0, 100.0})
    for (auto kind : {SchemeKind::Linear, SchemeKind::Nonlinear}) {
      if (factor == 1.0 && kind == SchemeKind::Linear) continue;  // shipped ex2 run
      RunConfig c;
      c.shape = Disc{};
      c.kbar = 0.0;
      c.J = 128;
      c.dt = 1e-3 * factor;
      c.T = 10.0;
      c.scheme = kind;
      runs.push_back(std::async(std::launch::async, run_tracked, c));
    }
  std::vector<RunResult> disc;
  disc.push_back(shipped.at("ex2_disc"));
  for (auto &f : runs) disc.push_back(f.get());
  double worst = -1e300;
  for (const auto &r : disc) {
    track_residual(r.out.max_residual);
    v.check(r.out.termination == Termination::Completed,
            std::string("disc run ") + to_string(r.config.scheme) + " dt=" + format_double(r.config.dt));
    v.check(r.max_rel_defect <= slack,
            std::string("disc ") + to_string(r.config.scheme) + " dt=" + format_double(r.config.dt));
    worst = std::max(worst, r.max_rel_defect);
  }
  v.note("disc_worst_rel_defect=%.2e", worst);

  // 50 random valid curves, 5 steps each
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_random = -1e300;
  int completed = 0, left_admissible = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const bool open = trial % 2 == 0;
    const auto kind = (trial / 2) % 2 == 0 ? SchemeKind::Linear : SchemeKind::Nonlinear;
    const auto Y = random_curve(rng, open, 24 + 8 * (trial % 5));
    const SchemeParams p{-2.0 + 4.0 * u(rng), std::pow(10.0, -4.0 + 4.0 * u(rng))};
    auto s = SchemeState::initial(make_initial_data(Y));
    const auto thresholds = StateThresholds::defaults_for(Y);
    bool admissible = true;
    try {
      for (int k = 0; k < 5; ++k) {
        // a step that leaves the admissible set ends the trial, as in run_simulation
        if (validate_state(s.Xm, thresholds) != StateCheck::Ok) {
          ++left_admissible;
          admissible = false;
          break;
        }
        auto [next, rep] = kind == SchemeKind::Linear ? step_linear(s, p) : step_nonlinear(s, p);
        const double d = rep.stability_defect(kind) / std::max(1.0, rep.energy_before);
        worst_random = std::max(worst_random, d);
        track_residual(rep.max_residual());
        v.check(d <= slack, "random curve " + std::to_string(trial));
        s = std::move(next);
      }
      if (admissible) ++completed;
    } catch (const DegenerateMesh &) {
      ++left_admissible;
    } catch (const std::exception &ex) {
      v.check(false, "random curve " + std::to_string(trial) + ": " + ex.what());
    }
  }
  v.note("random_worst_rel_defect=%.2e", worst_random);
  v.note("random_trials=%.0f", completed);
  v.note("left_admissible=%.0f", left_admissible);
  v.check(completed + left_admissible == 50, "random trial accounting");
  report("C4", "unconditional stability", v);
}

// ------------------------------------------------------------- examples

void criterion_5(const RunResult &r) {
  Verdict v;
  const double E = r.out.diagnostics.back().energy;
  v.check(r.out.termination == Termination::Completed, "completed");
  v.check(within_abs(E, 25.27, 0.05), "final energy");
  v.note("E(T)=%.4f", E);
  report("C5", "disc relaxes to a sphere", v);
}

void criterion_6(const RunResult &r) {
  Verdict v;
  const auto &s = r.out.final_stats;
  const double E = r.out.diagnostics.back().energy;
  const double ratio = s.center.r / s.mean_radius;
  v.check(r.out.termination == Termination::Completed, "completed");
  v.check(within_abs(E, 39.60, 0.10), "energy");
  v.check(within_abs(s.center.r, 3.039, 0.01) && within_abs(s.center.z, 0.0, 0.01), "center");
  v.check(within_abs(s.mean_radius, 2.146, 0.01), "mean radius");
  v.check(s.deviation <= 1.01, "deviation");
  v.check(within_abs(ratio, 1.416, 0.01), "radii ratio");
  v.check(s.mesh_ratio <= 1.01, "mesh ratio");
  v.check(r.seconds < 600.0, "runtime");
  v.note("E=%.4f", E);
  v.note("center_r=%.4f", s.center.r);
  v.note("r_c=%.4f", s.mean_radius);
  v.note("d_c=%.4f", s.deviation);
  v.note("ratio=%.4f", ratio);
  v.note("R^M=%.5f", s.mesh_ratio);
  v.note("runtime=%.1fs", r.seconds);
  report("C6", "annulus relaxes to a Clifford torus", v);
}

void criterion_7(const RunResult &r) {
  Verdict v;
  const auto &s = r.out.final_stats;
  const double ratio = s.center.r / s.mean_radius;
  v.check(r.out.termination == Termination::Completed, "completed");
  v.check(within_abs(ratio, 8.537, 0.15), "radii ratio");
  v.note("ratio=%.4f", ratio);
  v.note("center_r=%.4f", s.center.r);
  v.note("r_c=%.4f", s.mean_radius);
  report("C7", "annulus with kbar=-2, thin torus", v);
}

void criterion_8(const RunResult &k1, const RunResult &k2) {
  Verdict v;
  v.check(k1.out.termination == Termination::Completed, "kbar=1 reaches T");
  v.check(std::abs(k1.out.termination_time - 4.0) < 1e-9, "kbar=1 final time");
  v.check(k1.out.final_stats.deviation <= 1.1, "kbar=1 deviation");
  v.check(k2.out.termination == Termination::PinchOff, "kbar=2 pinch-off");
  v.check(within_abs(k2.out.termination_time, 0.77, 0.03), "kbar=2 pinch-off time");
  v.note("kbar1_d_c=%.4f", k1.out.final_stats.deviation);
  v.note("kbar2_pinch_t=%.4f", k2.out.termination_time);
  report("C8", "annulus with kbar=1 and kbar=2", v);
}

// ------------------------------------------------------------- properties

double rate(double a, double b) { return std::log2(a / b); }

PolygonalCurve random_periodic(std::mt19937 &rng, std::size_t J) {
  return random_curve(rng, false, J);
}

void criterion_9() {
  Verdict v;
  // quadrature exactness
  {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (const auto &[rule, deg] : {std::pair{QuadratureRule::gauss2(), 3},
                                    std::pair{QuadratureRule::gauss3(), 5}}) {
      for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> c(deg + 1);
        for (auto &x : c) x = u(rng);
        double exact = 0.0;
        for (int k = 0; k <= deg; ++k) exact += c[k] / (k + 1);
        auto poly = [&](std::size_t, double x) {
          double p = 0.0;
          for (int k = deg; k >= 0; --k) p = p * x + c[k];
          return p;
        };
        const double q = element_ip(poly, [](std::size_t, double) { return 1.0; }, rule, 1.0);
        worst = std::max(worst, std::abs(q - exact) / std::max(1.0, std::abs(exact)));
      }
    }
    v.check(worst <= 1e-14, "quadrature exactness");
    v.note("quad=%.1e", worst);
  }
  // vertex-normal identity
  {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto X = random_curve(rng, trial % 2 == 0, 8 + trial);
      const auto f = element_frames(X);
      const auto om = vertex_normals(X, f).omega;
      const auto w = lumped_weights(X);
      std::vector<double> chi(X.num_nodes());
      std::vector<Vec2> xi(X.num_nodes());
      for (std::size_t j = 0; j < chi.size(); ++j) {
        chi[j] = u(rng);
        xi[j] = {u(rng), u(rng)};
      }
      double lhs = 0.0, rhs = 0.0, scale = 0.0;
      for (std::size_t j = 0; j < chi.size(); ++j) lhs += w[j] * chi[j] * dot(om[j], xi[j]);
      for (std::size_t e = 0; e < f.size(); ++e) {
        const double a = chi[X.left(e)] * dot(f[e].nu, xi[X.left(e)]);
        const double b = chi[X.right(e)] * dot(f[e].nu, xi[X.right(e)]);
        rhs += 0.5 * f[e].len * (a + b);
        scale += 0.5 * f[e].len * (std::abs(a) + std::abs(b));
      }
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    v.check(worst <= 1e-13, "vertex-normal identity");
    v.note("omega=%.1e", worst);
  }
  // sqrt J expansion
  {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto P = random_periodic(rng, 24);
    std::vector<Vec2> W(P.num_nodes());
    for (auto &w : W) w = {u(rng), u(rng)};
    const auto g2 = QuadratureRule::gauss2();
    std::vector<double> errs;
    for (double dt : {2e-3, 1e-3, 5e-4, 2.5e-4}) {
      std::vector<Vec2> nodes;
      for (std::size_t j = 0; j < P.num_nodes(); ++j) nodes.push_back(P[j] + dt * W[j]);
      const PolygonalCurve Xm(Topology::Periodic, nodes);
      const auto sj = sqrt_jm(Xm, P);
      const auto f = element_frames(Xm);
      double err = 0.0;
      for (std::size_t e = 0; e < Xm.num_elements(); ++e) {
        const std::size_t a = Xm.left(e), b = Xm.right(e);
        const double stretch = dot(W[b] - W[a], f[e].tau) / f[e].len;
        for (std::size_t q = 0; q < 2; ++q) {
          const double s = g2.points[q];
          const double wr = (1 - s) * W[a].r + s * W[b].r;
          const double xr = (1 - s) * Xm[a].r + s * Xm[b].r;
          err = std::max(err, std::abs(sj.values[e][q] - (1.0 - 0.5 * (stretch + wr / xr) * dt)));
        }
      }
      errs.push_back(err);
    }
    double worst = 1e300;
    for (std::size_t k = 1; k < errs.size(); ++k) worst = std::min(worst, rate(errs[k - 1], errs[k]));
    v.check(worst >= 2.0 - 0.05, "sqrt J order");
    v.note("sqrtJ_order=%.2f", worst);
  }
  // linear vs nonlinear one-step difference
  {
    const auto s = SchemeState::initial(make_initial_data(build_curve(Semicircle{}, 128, 0.1)));
    std::vector<double> d;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
      const auto a = step_linear(s, {-1.0, dt});
      const auto b = step_nonlinear(s, {-1.0, dt});
      track_residual(a.second.max_residual());
      track_residual(b.second.max_residual());
      double m = 0.0;
      for (std::size_t j = 0; j < s.Xm.num_nodes(); ++j)
        m = std::max(m, norm(a.first.Xm[j] - b.first.Xm[j]));
      d.push_back(m);
    }
    const double o = std::min(rate(d[0], d[1]), rate(d[1], d[2]));
    v.check(o >= 1.9, "linear vs nonlinear order");
    v.note("lin_vs_nonlin_order=%.2f", o);
  }
  // curvature of refined circle polygons
  {
    std::vector<double> e;
    for (std::size_t J : {32u, 64u, 128u, 256u}) {
      const auto p = bgn_project(build_curve(TorusCircle{}, J, 0.1));
      track_residual(p.residual);
      double m = 0.0;
      for (double k : p.kappa0) m = std::max(m, std::abs(k + 1.0));
      e.push_back(m);
    }
    bool ok = true;
    for (std::size_t k = 1; k < e.size(); ++k) ok = ok && std::abs(rate(e[k - 1], e[k]) - 2.0) <= 0.1;
    v.check(ok, "kappa0 rate");
    v.note("kappa0_rate=%.2f", rate(e[2], e[3]));
  }
  // energies of exact sphere / torus data
  {
    std::vector<double> es, et;
    const double R = std::numbers::sqrt2;
    for (std::size_t J : {32u, 64u, 128u, 256u}) {
      const auto S = build_curve(Semicircle{}, J, 0.0);
      es.push_back(std::abs(discrete_energy(S, std::vector<double>(J + 1, -2.0), 0.0) - 8 * pi));
      const auto T = build_curve(TorusCircle{}, J, 0.0);
      std::vector<double> vk;
      for (const auto &x : T.nodes()) vk.push_back(-1.0 - (x.r - R) / x.r);
      et.push_back(std::abs(discrete_energy(T, vk, 0.0) - 4 * pi * pi));
    }
    bool ok = true;
    for (std::size_t k = 1; k < es.size(); ++k) {
      ok = ok && std::abs(rate(es[k - 1], es[k]) - 2.0) <= 0.1;
      ok = ok && std::abs(rate(et[k - 1], et[k]) - 2.0) <= 0.1;
    }
    v.check(ok, "energy rates");
    v.note("sphere_energy_rate=%.2f", rate(es[2], es[3]));
    v.note("torus_energy_rate=%.2f", rate(et[2], et[3]));
  }
  v.check(g_max_residual <= 1e-10, "solver residual");
  v.note("max_residual=%.1e", g_max_residual);
  report("C9", "property suite", v);
}

// ------------------------------------------------------------- exact sphere

double ode_radius(double kbar, double r0, double t) {
  namespace ode = boost::numeric::odeint;
  double r = r0;
  if (t == 0.0) return r;
  auto rhs = [kbar](const double &x, double &dxdt, double) {
    dxdt = -(kbar / x) * (2.0 / x + kbar);
  };
  ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_dopri5<double>()),
                          rhs, r, 0.0, t, 1e-4);
  return r;
}

void criterion_10() {
  Verdict v;
  double worst = 0.0;
  for (const SphereExact p : {SphereExact{-1.0, 1.0}, SphereExact{-2.0, 1.0}, SphereExact{-1.25, 3.0}})
    for (int k = 0; k <= 40; ++k) {
      const double t = 0.05 * k;
      worst = std::max(worst, std::abs(sphere_radius(t, p) - ode_radius(p.kbar, p.r0, t)));
    }
  v.check(worst <= 1e-10, "ODE agreement");
  v.note("max_diff=%.1e", worst);
  report("C10", "exact sphere vs ODE integration", v);
}

}  // namespace

int main() {
  const auto start = Clock::now();
  std::printf("acceptance suite (config dir %s)\n", WILFLOW_CONFIG_DIR);

  // every shipped config, concurrently; reused by criteria 4-8
  std::map<std::string, std::future<RunResult>> pending;
  for (const auto &entry : fs::directory_iterator(WILFLOW_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const RunConfig c = load_config(entry.path());
    pending.emplace(entry.path().stem().string(), std::async(std::launch::async, run_tracked, c));
  }

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_10();

  std::map<std::string, RunResult> shipped;
  for (auto &[name, f] : pending) shipped.emplace(name, f.get());
  for (const auto &[name, r] : shipped) track_residual(r.out.max_residual);

  criterion_4(shipped);
  criterion_5(shipped.at("ex2_disc"));
  criterion_6(shipped.at("ex5_annulus"));
  criterion_7(shipped.at("ex5_annulus_kbar_m2"));
  criterion_8(shipped.at("ex6_annulus_kbar1"), shipped.at("ex6_annulus_kbar2"));
  criterion_9();

  {
    Verdict v;
    for (const auto &[name, r] : shipped) {
      v.check(energy_non_increasing(r.out, 1e-9), name);
      v.detail += " " + name + "=" + to_string(r.out.termination);
    }
    report("X1", "shipped configs: energy non-increasing", v);
  }

  std::printf("%d failure(s); total %.1fs\n", failures, seconds_since(start));
  return failures == 0 ? 0 : 1;
}
