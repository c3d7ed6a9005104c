#pragma once

// Finite discrete measures and the transformations that act on them.

#include "metronoid/body.hpp"
#include "metronoid/parallel.hpp"
#include "metronoid/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>

namespace metronoid {

struct Atom {
  Vector x;
  double w = 0.0;
};

/// Positions and positive weights in R^n. Atoms keep insertion order, and
/// repeated positions are only combined by merge_atoms.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(int n = 1) : dim_(n) { require(n >= 1, "measure dimension must be >= 1"); }
  DiscreteMeasure(int n, std::vector<Atom> atoms) : DiscreteMeasure(n) {
    atoms_.reserve(atoms.size());
    for (auto& a : atoms) add(std::move(a.x), a.w);
  }

  void add(Vector x, double w) {
    require_dim(x, dim_, "atom position");
    require(all_finite(x), "atom position has non-finite coordinate");
    if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("atom weight must be positive and finite, got " + std::to_string(w));
    atoms_.push_back({std::move(x), w});
  }

  int dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  auto begin() const { return atoms_.begin(); }
  auto end() const { return atoms_.end(); }

  Matrix positions() const {
    Matrix m(dim_, static_cast<Eigen::Index>(atoms_.size()));
    for (std::size_t i = 0; i < atoms_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = atoms_[i].x;
    return m;
  }
  Vector weights() const {
    Vector w(static_cast<Eigen::Index>(atoms_.size()));
    for (std::size_t i = 0; i < atoms_.size(); ++i) w(static_cast<Eigen::Index>(i)) = atoms_[i].w;
    return w;
  }

 private:
  int dim_;
  std::vector<Atom> atoms_;
};

/// Left-to-right sum of the weights.
inline double total_mass(const DiscreteMeasure& mu) {
  double s = 0.0;
  for (const auto& a : mu) s += a.w;
  return s;
}

inline bool is_origin(const Vector& x) { return x.cwiseAbs().maxCoeff() == 0.0; }

inline double origin_weight(const DiscreteMeasure& mu, double tol = tol::kMerge) {
  double s = 0.0;
  for (const auto& a : mu)
    if (a.x.cwiseAbs().maxCoeff() <= tol) s += a.w;
  return s;
}

/// Weights of n equal atoms summing to `mass`; the last weight absorbs the
/// rounding so that the left-to-right sum is exactly `mass`.
inline std::vector<double> equal_weights(double mass, std::size_t count) {
  std::vector<double> w(count, mass / static_cast<double>(count));
  if (count >= 2) {
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < count; ++i) partial += w[i];
    w.back() = mass - partial;
  } else if (count == 1) {
    w[0] = mass;
  }
  return w;
}

inline double transport_cost(const DiscreteMeasure& mu, const ConvexBody& body) {
  require(mu.dim() == body.dim(), "transport_cost: dimension mismatch between measure and body");
  auto costs = parallel_map<double>(mu.size(), [&](std::size_t i) { return mu[i].w * gauge(body, mu[i].x); });
  return compensated_sum(costs);
}

/// Combines atoms whose positions agree within `tol` in every coordinate.
/// The first occurrence fixes the position; output is sorted
/// lexicographically.
inline DiscreteMeasure merge_atoms(const DiscreteMeasure& mu, double tol = tol::kMerge) {
  std::vector<std::size_t> order(mu.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vector& x = mu[a].x;
    const Vector& y = mu[b].x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x(i) < y(i)) return true;
      if (x(i) > y(i)) return false;
    }
    return false;
  });
  std::vector<Atom> out;
  std::vector<std::size_t> origin;  // index of the first atom in each cluster
  for (std::size_t idx : order) {
    const Atom& a = mu[idx];
    bool merged = false;
    // Clusters are contiguous in the first coordinate, so scan back while
    // the first coordinate is still within tolerance.
    for (std::size_t k = out.size(); k-- > 0;) {
      if (a.x(0) - out[k].x(0) > tol) break;
      if ((out[k].x - a.x).cwiseAbs().maxCoeff() <= tol) {
        out[k].w += a.w;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(a);
  }
  return DiscreteMeasure(mu.dim(), std::move(out));
}

/// Atoms (T x_i, w_i). T must be invertible (smallest singular value above
/// 1e-12 relative to the largest).
inline DiscreteMeasure pushforward(const Matrix& t, const DiscreteMeasure& mu) {
  require(t.rows() == mu.dim() && t.cols() == mu.dim(), "pushforward: map must be n x n");
  Eigen::JacobiSVD<Matrix> svd(t);
  const Vector& sv = svd.singularValues();
  double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : detail::kInf;
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0))) {
    throw DomainError("pushforward: linear map is singular (condition number " + std::to_string(cond) + ")");
  }
  DiscreteMeasure out(mu.dim());
  for (const auto& a : mu) out.add(t * a.x, a.w);
  return out;
}

namespace detail {
/// First clearly nonzero coordinate made positive.
inline Vector canonical_sign(const Vector& x, double tol) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) > tol) return x;
    if (x(i) < -tol) return -x;
  }
  return x;
}
}  // namespace detail

/// (mu + mu(-.)) / 2. Each +-x class with combined weight W becomes the
/// exact pair (x, W/2), (-x, W/2); origin mass stays at the origin.
inline DiscreteMeasure symmetrize(const DiscreteMeasure& mu) {
  DiscreteMeasure canon(mu.dim());
  double origin = 0.0;
  for (const auto& a : mu) {
    if (a.x.cwiseAbs().maxCoeff() <= tol::kMerge) {
      origin += a.w;
      continue;
    }
    canon.add(detail::canonical_sign(a.x, tol::kMerge), a.w);
  }
  DiscreteMeasure merged = merge_atoms(canon);
  DiscreteMeasure out(mu.dim());
  if (origin > 0.0) out.add(Vector::Zero(mu.dim()), origin);
  for (const auto& a : merged) {
    out.add(a.x, a.w / 2.0);
    out.add(-a.x, a.w / 2.0);
  }
  return out;
}

/// Atoms (r_i x_i, w_i / r_i) over the non-origin atoms (in order), plus a
/// unit atom at the origin. Origin atoms of mu are kept as they are.
inline DiscreteMeasure radial_rescale(const DiscreteMeasure& mu, const std::vector<double>& r) {
  std::size_t off = 0;
  for (const auto& a : mu)
    if (!is_origin(a.x)) ++off;
  require(r.size() == off, "radial_rescale: need one factor per non-origin atom (" + std::to_string(off) + "), got " +
                               std::to_string(r.size()));
  DiscreteMeasure out(mu.dim());
  std::size_t k = 0;
  for (const auto& a : mu) {
    if (is_origin(a.x)) {
      out.add(a.x, a.w);
      continue;
    }
    double ri = r[k++];
    if (!(ri >= 1.0) || !std::isfinite(ri)) throw DomainError("radial_rescale: factors must be finite and >= 1");
    out.add(ri * a.x, a.w / ri);
  }
  out.add(Vector::Zero(mu.dim()), 1.0);
  return out;
}

/// (r x_i, w_i / r) with r the total mass; the result has mass 1 up to
/// rounding.
inline DiscreteMeasure normalize_probability(const DiscreteMeasure& mu) {
  const double r = total_mass(mu);
  if (r < 1.0 - tol::kMass) throw DomainError("normalize_probability: total mass " + std::to_string(r) + " < 1");
  if (r == 1.0) return mu;
  DiscreteMeasure out(mu.dim());
  for (const auto& a : mu) out.add(r * a.x, a.w / r);
  return out;
}

/// delta_0 plus the atoms with |x| >= lambda.
inline DiscreteMeasure truncate(const DiscreteMeasure& mu, double lambda) {
  require(lambda > 0.0, "truncate: lambda must be positive");
  DiscreteMeasure out(mu.dim());
  out.add(Vector::Zero(mu.dim()), 1.0);
  for (const auto& a : mu)
    if (a.x.norm() >= lambda) out.add(a.x, a.w);
  return out;
}

inline bool is_symmetric_measure(const DiscreteMeasure& mu, double tol = tol::kMerge) {
  DiscreteMeasure m = merge_atoms(mu, tol);
  for (const auto& a : m) {
    if (a.x.cwiseAbs().maxCoeff() <= tol) continue;
    bool found = false;
    for (const auto& b : m) {
      if ((a.x + b.x).cwiseAbs().maxCoeff() <= tol) {
        found = std::abs(a.w - b.w) <= tol * std::max(1.0, a.w);
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

// ---------------------------------------------------------------- samplers

enum class SamplerKind { SphereUniform, BodyUniform };

struct SamplerSpec {
  SamplerKind kind = SamplerKind::SphereUniform;
  int dim = 2;
  double radius = 1.0;      // sphere radius
  double total_mass = 1.0;  // sphere mass
  std::optional<ConvexBody> body;
  double scale = 2.0;  // R for the body sampler
  std::size_t count = 1;
  std::uint64_t seed = 0;
};

/// Density factor exp(1 + (n-1)/(R-1)) of the weighted uniform measure on RK.
inline double uniform_density_factor(int n, double r) {
  require(r > 1.0, "density factor: R must be > 1");
  return std::exp(1.0 + (n - 1.0) / (r - 1.0));
}

/// Uniform points on radius * S^{n-1}, each of weight total_mass / count.
inline DiscreteMeasure sample_sphere(int n, double radius, double mass, std::size_t count, std::uint64_t seed) {
  require(count >= 1, "sample_sphere: count must be >= 1");
  require(n >= 1, "sample_sphere: dimension must be >= 1");
  require(radius > 0.0 && mass > 0.0, "sample_sphere: radius and mass must be positive");
  auto points = parallel_map<Vector>(count, [&](std::size_t i) {
    CounterRng rng(seed, "sphere", i);
    Vector g(n);
    double nrm = 0.0;
    while (!(nrm > 1e-150)) {
      for (int k = 0; k < n; ++k) g(k) = rng.normal();
      nrm = g.norm();
    }
    return Vector(radius * (g / nrm));
  });
  auto w = equal_weights(mass, count);
  DiscreteMeasure out(n);
  for (std::size_t i = 0; i < count; ++i) out.add(std::move(points[i]), w[i]);
  return out;
}

namespace detail {

/// Rejection sampling of `count` points uniform in scale*K; point i uses its
/// own stream, so output is independent of scheduling.
inline std::vector<Vector> rejection_points(const ConvexBody& body, double scale, std::size_t count, std::uint64_t seed,
                                            std::string_view tag) {
  const Box box = bounding_box(body);
  const Vector lo = box.lo * scale, span = (box.hi - box.lo) * scale;
  const BodyIndicator inside(body, scale);
  const int n = body.dim();
  constexpr std::size_t kAttemptCap = 100000;
  std::vector<std::size_t> attempts(count, 0);
  auto pts = parallel_map<Vector>(count, [&](std::size_t i) {
    CounterRng rng(seed, tag, i);
    Vector x(n);
    for (std::size_t t = 1; t <= kAttemptCap; ++t) {
      for (int k = 0; k < n; ++k) x(k) = lo(k) + span(k) * rng.uniform();
      if (inside(x)) {
        attempts[i] = t;
        return x;
      }
    }
    attempts[i] = kAttemptCap + 1;
    return x;
  });
  std::size_t total = 0;
  bool capped = false;
  for (auto a : attempts) {
    total += a;
    capped = capped || a > kAttemptCap;
  }
  const double rate = static_cast<double>(count) / static_cast<double>(total);
  if (capped || rate < 1e-4) {
    throw NumericalError("rejection sampling: acceptance rate " + std::to_string(rate) +
                         " below 1e-4; body is too thin for its bounding box");
  }
  return pts;
}

}  // namespace detail

/// Uniform points in R*K with weights density/count each, total mass
/// exactly the density factor.
inline DiscreteMeasure sample_body_uniform(const ConvexBody& body, double r, std::size_t count, std::uint64_t seed) {
  require(count >= 1, "sample_body_uniform: count must be >= 1");
  require(r > 1.0, "sample_body_uniform: R must be > 1");
  const double factor = uniform_density_factor(body.dim(), r);
  auto pts = detail::rejection_points(body, r, count, seed, "body-uniform");
  auto w = equal_weights(factor, count);
  DiscreteMeasure out(body.dim());
  for (std::size_t i = 0; i < count; ++i) out.add(std::move(pts[i]), w[i]);
  return out;
}

/// Uniform points in K with weights mass/count each.
inline DiscreteMeasure sample_in_body(const ConvexBody& body, double mass, std::size_t count, std::uint64_t seed) {
  require(count >= 1, "sample_in_body: count must be >= 1");
  auto pts = detail::rejection_points(body, 1.0, count, seed, "in-body");
  auto w = equal_weights(mass, count);
  DiscreteMeasure out(body.dim());
  for (std::size_t i = 0; i < count; ++i) out.add(std::move(pts[i]), w[i]);
  return out;
}

inline DiscreteMeasure sample(const SamplerSpec& spec) {
  if (spec.kind == SamplerKind::SphereUniform) {
    return sample_sphere(spec.dim, spec.radius, spec.total_mass, spec.count, spec.seed);
  }
  require(spec.body.has_value(), "sampler: body_uniform needs a body");
  return sample_body_uniform(*spec.body, spec.scale, spec.count, spec.seed);
}

// ------------------------------------------------------------ grid snapping

struct GridSpec {
  double range = 1.0;  // R
  int resolution = 0;  // m, cell side 2^-m
  double eps = 0.1;

  double side() const { return std::ldexp(1.0, -resolution); }
};

/// Smallest m with sqrt(n) / 2^m <= eps / mass.
inline int required_resolution(int n, double mass, double eps) {
  int m = 0;
  while (std::sqrt(static_cast<double>(n)) / std::ldexp(1.0, m) > eps / mass) ++m;
  return m;
}

/// Index k with x in [(k - 1/2) h, (k + 1/2) h). x/h is exact because h is a
/// power of two, and so is the fractional part.
inline double grid_index(double x, double h) {
  double q = x / h;
  double k = std::floor(q);
  return (q - k) >= 0.5 ? k + 1.0 : k;
}

/// Moves each atom to the centre a of its half-open box B_a; mass outside
/// the covered cube E goes to the origin. No resolution check.
inline DiscreteMeasure snap_to_grid(const DiscreteMeasure& mu, double range, int resolution) {
  require(range > 0.0, "grid: range must be positive");
  require(resolution >= 0, "grid: resolution must be >= 0");
  const double h = std::ldexp(1.0, -resolution);
  const double kmax = std::floor(range / h);  // grid points a = k h with |k| <= kmax
  std::map<std::vector<double>, double> cells;
  double origin = 0.0;
  bool origin_seen = false;
  for (const auto& a : mu) {
    std::vector<double> key(static_cast<std::size_t>(mu.dim()));
    bool outside = false;
    bool zero = true;
    for (int i = 0; i < mu.dim(); ++i) {
      double k = grid_index(a.x(i), h);
      if (std::abs(k) > kmax) outside = true;
      key[static_cast<std::size_t>(i)] = k;
      zero = zero && k == 0.0;
    }
    if (outside || zero) {
      origin += a.w;
      origin_seen = true;
      continue;
    }
    cells[key] += a.w;
  }
  DiscreteMeasure out(mu.dim());
  if (origin_seen) out.add(Vector::Zero(mu.dim()), origin);
  for (const auto& [key, w] : cells) {
    Vector x(mu.dim());
    for (int i = 0; i < mu.dim(); ++i) x(i) = key[static_cast<std::size_t>(i)] * h;
    out.add(std::move(x), w);
  }
  return out;
}

struct Discretization {
  DiscreteMeasure snapped;  // before the final rescale
  DiscreteMeasure measure;  // snapped, pushed forward by I/(1 - 2 eps)
};

inline Discretization discretize_grid_full(const DiscreteMeasure& mu, const GridSpec& grid) {
  require(grid.eps > 0.0 && grid.eps < 0.25, "discretize_grid: eps must lie in (0, 1/4)");
  const double mass = total_mass(mu);
  const double diam = std::sqrt(static_cast<double>(mu.dim())) * grid.side();
  if (diam > grid.eps / mass) {
    throw DomainError("discretize_grid: cell diameter " + std::to_string(diam) + " exceeds eps/mass " +
                      std::to_string(grid.eps / mass) + "; need resolution m >= " +
                      std::to_string(required_resolution(mu.dim(), mass, grid.eps)));
  }
  Discretization d{snap_to_grid(mu, grid.range, grid.resolution), DiscreteMeasure(mu.dim())};
  const double s = 1.0 / (1.0 - 2.0 * grid.eps);
  for (const auto& a : d.snapped) d.measure.add(s * a.x, a.w);
  return d;
}

inline DiscreteMeasure discretize_grid(const DiscreteMeasure& mu, const GridSpec& grid) {
  return discretize_grid_full(mu, grid).measure;
}

}  // namespace metronoid
