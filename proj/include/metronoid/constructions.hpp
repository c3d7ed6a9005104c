#pragma once

// Explicit approximating measures, Monte Carlo volumes, and the volume
// inequalities used to certify them.

#include "metronoid/metronoid.hpp"
#include "metronoid/polygon.hpp"

#include <functional>
#include <string>

namespace metronoid {

/// E|<theta, e_1>| for theta uniform on S^{n-1}:
/// Gamma(n/2) / (sqrt(pi) Gamma((n+1)/2)). Asymptotically sqrt(2/(pi n)).
inline double mean_abs_inner(int n) {
  require(n >= 1, "mean_abs_inner: n must be >= 1");
  return std::exp(std::lgamma(0.5 * n) - std::lgamma(0.5 * (n + 1))) / std::sqrt(std::numbers::pi);
}

inline double mean_abs_inner_asymptotic(int n) { return std::sqrt(2.0 / (std::numbers::pi * n)); }

struct ConstructionReport {
  DiscreteMeasure measure;
  double mass = 0.0;
  double cost = 0.0;
  double scale = 0.0;  // sphere radius, or R for the body construction
  ContainmentReport containment;
  double outer_ratio = 0.0;    // max over net of h_M / h_K
  double support_error = 0.0;  // max over net of |h_M - h_K|
  double bound_mass = 0.0;
  double bound_cost = 0.0;
};

namespace detail {
inline void fill_net_stats(ConstructionReport& rep, const Metronoid& m, const ConvexBody& body, const DirectionNet& net,
                           const ContainOptions& opt) {
  auto h = msupport_net(m, net);
  rep.containment = contains_body_given(m, body, net, h, opt);
  rep.outer_ratio = 0.0;
  rep.support_error = 0.0;
  for (std::size_t k = 0; k < net.size(); ++k) {
    double hk = support(body, net[k]);
    rep.outer_ratio = std::max(rep.outer_ratio, h[k] / hk);
    rep.support_error = std::max(rep.support_error, std::abs(h[k] - hk));
  }
}
}  // namespace detail

/// 2 sigma_R with R = 1 / mean_abs_inner(n): mass 2, every atom at radius R,
/// and M(mu) close to the unit ball.
inline ConstructionReport sphere_construction(int n, std::size_t count, std::uint64_t seed, const DirectionNet& net,
                                              double tol = 0.02) {
  require(static_cast<std::size_t>(n) <= count, "sphere_construction: count must be >= n");
  ConstructionReport rep;
  rep.scale = 1.0 / mean_abs_inner(n);
  rep.measure = sample_sphere(n, rep.scale, 2.0, count, seed);
  rep.mass = total_mass(rep.measure);
  const ConvexBody ball = ConvexBody::ball(n);
  rep.cost = transport_cost(rep.measure, ball);
  ContainOptions opt;
  opt.tol = tol;
  detail::fill_net_stats(rep, Metronoid(rep.measure), ball, net, opt);
  rep.bound_mass = 2.0;
  rep.bound_cost = 2.0 * rep.scale;
  return rep;
}

// -------------------------------------------------------------- Monte Carlo

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMcChunk = 4096;

/// Hit ratio over the bounding box times its volume.
inline VolumeEstimate volume_mc(const ConvexBody& body, std::size_t samples, std::uint64_t seed) {
  require(samples >= 1, "volume_mc: samples must be >= 1");
  const Box box = bounding_box(body);
  const Vector span = box.hi - box.lo;
  const BodyIndicator inside(body);
  const std::size_t chunks = (samples + kMcChunk - 1) / kMcChunk;
  auto hits = parallel_map<std::size_t>(chunks, [&](std::size_t c) {
    CounterRng rng(seed, "volume", c);
    std::size_t begin = c * kMcChunk, end = std::min(samples, begin + kMcChunk), h = 0;
    Vector x(body.dim());
    for (std::size_t i = begin; i < end; ++i) {
      for (int k = 0; k < body.dim(); ++k) x(k) = box.lo(k) + span(k) * rng.uniform();
      if (inside(x)) ++h;
    }
    return h;
  });
  std::size_t total = 0;
  for (auto h : hits) total += h;
  const double p = static_cast<double>(total) / static_cast<double>(samples);
  const double vol = span.prod();
  return {vol * p, vol * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), samples, seed};
}

/// Monte Carlo barycenter of K from `samples` uniform points.
inline Vector barycenter_mc(const ConvexBody& body, std::size_t samples, std::uint64_t seed) {
  auto pts = detail::rejection_points(body, 1.0, samples, seed, "centering");
  Vector c = Vector::Zero(body.dim());
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(samples);
}

inline bool is_simplex(const ConvexBody& body) {
  return body.kind() == BodyKind::VPolytope && body.points().cols() == body.dim() + 1 && body.full_dimensional();
}

/// Barycenter within 0.01 diam of the origin. Symmetric bodies and
/// simplices are decided exactly, everything else by Monte Carlo.
inline bool is_centered(const ConvexBody& body, std::uint64_t seed = 0, std::size_t samples = 200000) {
  const double diam = diameter_bound(body);
  if (body.is_symmetric()) return true;
  if (is_simplex(body)) return body.points().rowwise().mean().norm() <= 0.01 * diam;
  return barycenter_mc(body, samples, seed).norm() <= 0.01 * diam;
}

/// Regular simplex with vertices on the unit sphere and barycenter 0.
inline ConvexBody centered_simplex(int n) {
  require(n >= 1, "centered_simplex: n must be >= 1");
  // Columns e_i - (1/(n+1)) 1 in R^{n+1} span the hyperplane sum = 0;
  // express them in an orthonormal basis of that hyperplane.
  Matrix p = Matrix::Identity(n + 1, n + 1) - Matrix::Constant(n + 1, n + 1, 1.0 / (n + 1));
  Eigen::HouseholderQR<Matrix> qr(p);
  Matrix q = qr.householderQ() * Matrix::Identity(n + 1, n);
  Matrix v = q.transpose() * p;  // n x (n+1)
  std::vector<Vector> verts;
  for (int j = 0; j <= n; ++j) verts.emplace_back(v.col(j) / v.col(j).norm());
  return ConvexBody::vpolytope(verts);
}

/// Uniform points of K shared by the half-space and tail estimates.
inline std::vector<Vector> body_points(const ConvexBody& body, std::size_t samples, std::uint64_t seed) {
  return detail::rejection_points(body, 1.0, samples, seed, "mc-body");
}

inline VolumeEstimate fraction_estimate(const std::vector<Vector>& pts, const Vector& u, double level, std::uint64_t seed) {
  std::size_t hits = 0;
  for (const auto& p : pts)
    if (p.dot(u) >= level) ++hits;
  const double n = static_cast<double>(pts.size());
  const double p = static_cast<double>(hits) / n;
  return {p, std::sqrt(p * (1.0 - p) / n), pts.size(), seed};
}

/// vol(K intersect {<x, u> >= 0}) / vol(K).
inline VolumeEstimate grunbaum_ratio(const ConvexBody& body, const Vector& u, std::size_t samples, std::uint64_t seed) {
  require_dim(u, body.dim(), "direction");
  if (!is_centered(body, seed)) throw DomainError("grunbaum_ratio: body is not centered");
  return fraction_estimate(body_points(body, samples, seed), u, 0.0, seed);
}

/// vol(K intersect {<x, u> >= h_K(u)/R}) / vol(K); R = inf gives level 0
/// and the same sample set as grunbaum_ratio.
inline VolumeEstimate tail_volume_ratio(const ConvexBody& body, const Vector& u, double r, std::size_t samples,
                                        std::uint64_t seed) {
  require_dim(u, body.dim(), "direction");
  require(r > 1.0, "tail_volume_ratio: R must be > 1");
  if (!is_centered(body, seed)) throw DomainError("tail_volume_ratio: body is not centered");
  const double level = std::isinf(r) ? 0.0 : support(body, u) / r;
  return fraction_estimate(body_points(body, samples, seed), u, level, seed);
}

/// exp(-1 - (n-1)/(R-1)), the claimed lower bound on the tail fraction.
inline double tail_bound(int n, double r) { return 1.0 / uniform_density_factor(n, r); }

struct TailConvexityResult {
  double lhs = 0.0;  // int_1^R g(f) / int_0^R g(f)
  double rhs = 0.0;  // same for the line through (1, f(1)) and (R, 0)
  bool holds = false;
};

/// Compares the tail ratios of g(f) and g(f~) for g(t) = t^power, f
/// nonnegative concave on [0, R], by the trapezoid rule on a 1e-3 grid.
inline TailConvexityResult tail_convexity_check(const std::function<double(double)>& f, double r, int power) {
  require(r > 1.0, "tail_convexity_check: R must be > 1");
  require(power >= 0, "tail_convexity_check: power must be >= 0");
  std::vector<double> t;
  const int n0 = 1000;
  const int n1 = static_cast<int>(std::ceil((r - 1.0) / 1e-3));
  for (int i = 0; i <= n0; ++i) t.push_back(static_cast<double>(i) / n0);
  for (int i = 1; i <= n1; ++i) t.push_back(1.0 + (r - 1.0) * i / n1);
  std::vector<double> v(t.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    v[i] = f(t[i]);
    if (!(v[i] >= -1e-12) || !std::isfinite(v[i])) throw DomainError("tail_convexity_check: f must be nonnegative");
    v[i] = std::max(v[i], 0.0);
    vmax = std::max(vmax, v[i]);
  }
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    double s0 = (v[i] - v[i - 1]) / (t[i] - t[i - 1]);
    double s1 = (v[i + 1] - v[i]) / (t[i + 1] - t[i]);
    if (s1 > s0 + 1e-7 * (1.0 + std::abs(s0) + vmax)) throw DomainError("tail_convexity_check: f is not concave on the grid");
  }
  const double f1 = v[static_cast<std::size_t>(n0)];
  auto ratio = [&](auto&& value) {
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      double piece = 0.5 * (t[i + 1] - t[i]) * (std::pow(value(i), power) + std::pow(value(i + 1), power));
      (i < static_cast<std::size_t>(n0) ? head : tail) += piece;
    }
    return tail / (head + tail);
  };
  TailConvexityResult res;
  res.lhs = ratio([&](std::size_t i) { return v[i]; });
  res.rhs = ratio([&](std::size_t i) { return f1 * (r - t[i]) / (r - 1.0); });
  res.holds = res.lhs >= res.rhs - 1e-9;
  return res;
}

/// Weighted uniform measure on RK with total mass exp(1 + (n-1)/(R-1)).
inline ConstructionReport uniform_body_construction(const ConvexBody& body, double r, std::size_t count,
                                                    std::uint64_t seed, const DirectionNet& net, double tol = 1e-2) {
  const int n = body.dim();
  require(r > 1.0 && r <= n, "uniform_body_construction: need 1 < R <= n");
  if (!is_centered(body, seed)) throw DomainError("uniform_body_construction: body is not centered");
  ConstructionReport rep;
  rep.scale = r;
  rep.measure = sample_body_uniform(body, r, count, seed);
  rep.mass = total_mass(rep.measure);
  rep.cost = transport_cost(rep.measure, body);
  ContainOptions opt;
  opt.tol = tol;
  opt.allow_exact = false;
  detail::fill_net_stats(rep, Metronoid(rep.measure), body, net, opt);
  rep.bound_mass = uniform_density_factor(n, r);
  rep.bound_cost = r * rep.bound_mass;
  return rep;
}

struct TableRow {
  int n = 0;
  double r = 0.0;
  double mass = 0.0;
  double cost = 0.0;
  double bound_mass = 0.0;
  double bound_cost = 0.0;
  double contain_lo = 0.0;  // worst h_M - h_K over the net
  double contain_hi = 0.0;  // max h_M / h_K over the net
  bool verdict = false;
};

inline TableRow evaluate_dstar_Dstar(const ConstructionReport& rep, const ConvexBody& body, double r) {
  TableRow row;
  row.n = body.dim();
  row.r = r;
  row.mass = rep.mass;
  row.cost = rep.cost;
  row.bound_mass = rep.bound_mass;
  row.bound_cost = rep.bound_cost;
  row.contain_lo = rep.containment.worst_slack;
  row.contain_hi = rep.outer_ratio;
  const double slack = 1e-12;
  row.verdict = rep.containment.pass && rep.outer_ratio <= r + 1e-7 && rep.mass <= rep.bound_mass * (1 + slack) &&
                rep.cost <= rep.bound_cost * (1 + slack);
  return row;
}

}  // namespace metronoid
