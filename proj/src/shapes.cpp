#include "wilflow/shapes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wilflow {
namespace {

using std::numbers::pi;

// Piecewise path made of straight pieces and circular arcs, sampled
// uniformly in arclength.
struct PathPiece {
  Vec2 start;
  Vec2 end;             // for lines
  Vec2 center;          // for arcs
  double radius = 0.0;  // 0 => line
  double angle0 = 0.0;
  double sweep = 0.0;   // signed; negative is clockwise

  double length() const {
    return radius > 0.0 ? radius * std::abs(sweep) : norm(end - start);
  }
  Vec2 at(double s) const {  // s in [0, length]
    if (radius > 0.0) {
      const double a = angle0 + sweep * (s / length());
      return center + Vec2{radius * std::cos(a), radius * std::sin(a)};
    }
    return start + (s / length()) * (end - start);
  }
};

PathPiece line(Vec2 a, Vec2 b) { return {a, b, {}, 0.0, 0.0, 0.0}; }
PathPiece arc(Vec2 c, double rad, double a0, double sweep) {
  return {{}, {}, c, rad, a0, sweep};
}

std::vector<Vec2> sample(const std::vector<PathPiece> &path, std::size_t J, bool closed) {
  double total = 0.0;
  for (const auto &p : path) total += p.length();
  const std::size_t count = closed ? J : J + 1;
  std::vector<Vec2> out;
  out.reserve(count);
  std::size_t piece = 0;
  double offset = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double s = total * static_cast<double>(j) / static_cast<double>(J);
    while (piece + 1 < path.size() && s > offset + path[piece].length()) {
      offset += path[piece].length();
      ++piece;
    }
    out.push_back(path[piece].at(std::min(s - offset, path[piece].length())));
  }
  return out;
}

void require_positive(double v, const char *what) {
  if (!(v > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// Angle map theta(rho) = base(rho) + eps cos(base(rho)) must be strictly
// monotone: |dtheta/dbase| = |1 - eps sin(base)| > 0 needs |eps| < 1.
void require_injective_eps(double eps) {
  if (!(std::abs(eps) < 1.0))
    throw std::invalid_argument("eps must satisfy |eps| < 1 for an injective parameterization");
}

}  // namespace

Topology topology_of(const ShapeSpec &shape) {
  return std::holds_alternative<Stadium>(shape) || std::holds_alternative<TorusCircle>(shape)
             ? Topology::Periodic
             : Topology::Open;
}

PolygonalCurve build_curve(const ShapeSpec &shape, std::size_t J, double eps) {
  if (J < 4) throw std::invalid_argument("build_curve: J must be at least 4");
  const double h = 1.0 / static_cast<double>(J);

  if (const auto *s = std::get_if<Semicircle>(&shape)) {
    require_positive(s->radius, "Semicircle radius");
    require_injective_eps(eps);
    std::vector<Vec2> x(J + 1);
    for (std::size_t j = 0; j <= J; ++j) {
      const double base = (0.5 - static_cast<double>(j) * h) * pi;
      const double a = base + eps * std::cos(base);
      x[j] = {s->radius * std::cos(a), s->radius * std::sin(a)};
    }
    // cos(+-pi/2) is ~6e-17; the attachment condition is exact
    x.front().r = 0.0;
    x.back().r = 0.0;
    return PolygonalCurve(Topology::Open, std::move(x));
  }

  if (const auto *t = std::get_if<TorusCircle>(&shape)) {
    require_positive(t->minor, "TorusCircle minor radius");
    require_positive(t->major - t->minor, "TorusCircle major - minor radius");
    require_injective_eps(eps);
    std::vector<Vec2> x(J);
    for (std::size_t j = 0; j < J; ++j) {
      const double base = (0.25 - static_cast<double>(j) * h) * 2.0 * pi;
      const double a = base + eps * std::cos(base);
      x[j] = {t->major + t->minor * std::cos(a), t->minor * std::sin(a)};
    }
    return PolygonalCurve(Topology::Periodic, std::move(x));
  }

  if (const auto *d = std::get_if<Disc>(&shape)) {
    require_positive(d->height, "Disc height");
    const double rad = 0.5 * d->height;
    const double straight = 0.5 * d->width - rad;
    require_positive(straight, "Disc width - height");
    std::vector<PathPiece> path{line({0.0, rad}, {straight, rad}),
                                arc({straight, 0.0}, rad, 0.5 * pi, -pi),
                                line({straight, -rad}, {0.0, -rad})};
    auto x = sample(path, J, false);
    x.front().r = 0.0;
    x.back().r = 0.0;
    return PolygonalCurve(Topology::Open, std::move(x));
  }

  if (const auto *c = std::get_if<RoundedCylinder>(&shape)) {
    require_positive(c->width, "RoundedCylinder width");
    const double rad = 0.5 * c->width;
    const double half_straight = 0.5 * c->height - rad;
    require_positive(half_straight, "RoundedCylinder height - width");
    std::vector<PathPiece> path{arc({0.0, half_straight}, rad, 0.5 * pi, -0.5 * pi),
                                line({rad, half_straight}, {rad, -half_straight}),
                                arc({0.0, -half_straight}, rad, 0.0, -0.5 * pi)};
    auto x = sample(path, J, false);
    x.front().r = 0.0;
    x.back().r = 0.0;
    return PolygonalCurve(Topology::Open, std::move(x));
  }

  const auto &st = std::get<Stadium>(shape);
  require_positive(st.height, "Stadium height");
  const double rad = 0.5 * st.height;
  const double half_straight = 0.5 * st.length - rad;
  require_positive(half_straight, "Stadium length - height");
  const Vec2 c = st.center;
  require_positive(c.r - 0.5 * st.length, "Stadium distance to axis");
  const Vec2 cl = c - Vec2{half_straight, 0.0};
  const Vec2 cr = c + Vec2{half_straight, 0.0};
  // start at the top middle and go clockwise
  std::vector<PathPiece> path{line(c + Vec2{0.0, rad}, cr + Vec2{0.0, rad}),
                              arc(cr, rad, 0.5 * pi, -pi),
                              line(cr - Vec2{0.0, rad}, cl - Vec2{0.0, rad}),
                              arc(cl, rad, -0.5 * pi, -pi),
                              line(cl + Vec2{0.0, rad}, c + Vec2{0.0, rad})};
  return PolygonalCurve(Topology::Periodic, sample(path, J, true));
}

}  // namespace wilflow
