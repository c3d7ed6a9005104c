#pragma once

// Convex polygons in the plane: half-plane clipping, area, centroid, and
// caps of prescribed area.

#include "metronoid/body.hpp"

#include <numbers>
#include <vector>

namespace metronoid {

using Polygon = std::vector<Eigen::Vector2d>;

inline double polygon_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& u = p[i];
    const auto& v = p[(i + 1) % p.size()];
    a += u.x() * v.y() - v.x() * u.y();
  }
  return 0.5 * a;
}

inline Eigen::Vector2d polygon_centroid(const Polygon& p) {
  double a = 0.0;
  Eigen::Vector2d c = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& u = p[i];
    const auto& v = p[(i + 1) % p.size()];
    double cross = u.x() * v.y() - v.x() * u.y();
    a += cross;
    c += cross * (u + v);
  }
  if (a == 0.0) {
    Eigen::Vector2d m = Eigen::Vector2d::Zero();
    for (const auto& u : p) m += u;
    return p.empty() ? m : Eigen::Vector2d(m / static_cast<double>(p.size()));
  }
  return c / (3.0 * a);
}

/// Sutherland-Hodgman against the half-plane <x, n> >= level.
inline Polygon clip_halfplane(const Polygon& p, const Eigen::Vector2d& n, double level) {
  Polygon out;
  if (p.empty()) return out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    double da = a.dot(n) - level, db = b.dot(n) - level;
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) {
      double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

/// Counter-clockwise convex hull (monotone chain).
inline Polygon convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  Polygon h(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
    h[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline Polygon polygon_of(const ConvexBody& body) {
  require(body.dim() == 2, "polygon: body must be planar");
  require(body.kind() != BodyKind::Ball, "polygon: the disk is not a polygon");
  auto v = as_vpolytope(body);
  std::vector<Eigen::Vector2d> pts;
  if (v) {
    for (Eigen::Index j = 0; j < v->points().cols(); ++j) pts.emplace_back(v->points()(0, j), v->points()(1, j));
  } else {
    // Zonotope: its vertices are support points of generic directions.
    const Matrix& g = body.points();
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      Eigen::Vector2d nrm(-g(1, j), g(0, j));
      for (double s : {1.0, -1.0}) {
        for (double eps : {1e-7, -1e-7}) {
          Eigen::Vector2d th = s * nrm + eps * Eigen::Vector2d(g(0, j), g(1, j));
          Vector t(2);
          t << th.x(), th.y();
          if (t.cwiseAbs().maxCoeff() == 0.0) continue;
          Vector p = support_point(body, t);
          pts.emplace_back(p(0), p(1));
        }
      }
    }
  }
  return convex_hull_2d(pts);
}

/// Level R with area({x in K : <x, theta> >= R}) = delta, by bisection.
inline double cap_level(const Polygon& k, const Eigen::Vector2d& theta, double delta) {
  double area = polygon_area(k);
  require(delta > 0.0 && delta < area, "cap_level: delta must lie in (0, area)");
  double hi = -detail::kInf, lo = detail::kInf;
  for (const auto& v : k) {
    hi = std::max(hi, v.dot(theta));
    lo = std::min(lo, v.dot(theta));
  }
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double a = polygon_area(clip_halfplane(k, theta, mid));
    if (a > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Extreme point of M(mu_delta) for mu_delta uniform on K with density
/// 1/delta: the centroid of the cap of area delta in direction theta.
inline Vector uniform_cap_extreme_2d(const ConvexBody& polygon, double delta, const Vector& theta) {
  require(polygon.dim() == 2, "uniform_cap_extreme_2d: body must be planar");
  require_dim(theta, 2, "direction");
  Polygon k = polygon_of(polygon);
  double area = polygon_area(k);
  if (!(delta > 0.0 && delta < area)) throw DomainError("uniform_cap_extreme_2d: delta out of range (0, area)");
  Eigen::Vector2d th(theta(0), theta(1));
  th.normalize();
  double level = cap_level(k, th, delta);
  Eigen::Vector2d c = polygon_centroid(clip_halfplane(k, th, level));
  return make_vector({c.x(), c.y()});
}

/// area(K intersect {<x, u> >= level}) / area(K). The disk uses the
/// circular-segment formula.
inline double exact_cap_fraction_2d(const ConvexBody& body, const Vector& u, double level) {
  require(body.dim() == 2, "exact_cap_fraction_2d: body must be planar");
  const double nu = u.norm();
  if (body.kind() == BodyKind::Ball) {
    double r = body.radius();
    double d = level / nu;
    if (d >= r) return 0.0;
    if (d <= -r) return 1.0;
    double phi = 2.0 * std::acos(d / r);
    return (phi - std::sin(phi)) / (2.0 * std::numbers::pi);
  }
  Polygon k = polygon_of(body);
  Eigen::Vector2d th(u(0), u(1));
  return polygon_area(clip_halfplane(k, th, level)) / polygon_area(k);
}

}  // namespace metronoid
