#pragma once

// Convex bodies with support and gauge oracles.

#include "metronoid/core.hpp"
#include "metronoid/lp.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

namespace metronoid {

enum class BodyKind { Ball, Cube, CrossPolytope, VPolytope, ZonotopeOneSided, ZonotopeSymmetric };

inline const char* to_string(BodyKind k) {
  switch (k) {
    case BodyKind::Ball: return "ball";
    case BodyKind::Cube: return "cube";
    case BodyKind::CrossPolytope: return "cross";
    case BodyKind::VPolytope: return "vpolytope";
    case BodyKind::ZonotopeOneSided: return "zonotope_one_sided";
    case BodyKind::ZonotopeSymmetric: return "zonotope_symmetric";
  }
  return "?";
}

inline BodyKind body_kind_from_string(const std::string& s) {
  if (s == "ball") return BodyKind::Ball;
  if (s == "cube") return BodyKind::Cube;
  if (s == "cross") return BodyKind::CrossPolytope;
  if (s == "vpolytope") return BodyKind::VPolytope;
  if (s == "zonotope_one_sided") return BodyKind::ZonotopeOneSided;
  if (s == "zonotope_symmetric") return BodyKind::ZonotopeSymmetric;
  throw DomainError("unknown body type '" + s + "'");
}

/// Rank of a set of points relative to their first element (affine rank).
inline Eigen::Index affine_rank(const Matrix& cols) {
  if (cols.cols() <= 1) return 0;
  Matrix diff = cols.rightCols(cols.cols() - 1).colwise() - cols.col(0);
  Eigen::FullPivLU<Matrix> lu(diff);
  lu.setThreshold(1e-10);
  return lu.rank();
}

inline Eigen::Index linear_rank(const Matrix& cols) {
  if (cols.cols() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(cols);
  lu.setThreshold(1e-10);
  return lu.rank();
}

/// True when 0 = sum a_j p_j with sum a_j = 1 and every a_j >= eps is
/// feasible (origin in the relative interior of conv(points)).
inline bool origin_in_relative_interior(const Matrix& points, double eps = 1e-9) {
  const Eigen::Index n = points.rows(), m = points.cols();
  if (m == 0) return false;
  LpProblem lp;
  lp.objective = Vector::Zero(m);
  lp.eq_matrix = Matrix(n + 1, m);
  lp.eq_matrix.topRows(n) = points;
  lp.eq_matrix.row(n).setOnes();
  lp.eq_rhs = Vector::Zero(n + 1);
  lp.eq_rhs(n) = 1.0;
  lp.lower = Vector::Constant(m, eps);
  return lp_solve(lp).optimal();
}

/// Immutable convex body. Analytic variants carry a radius; the others a
/// point list stored column-wise (vertices or generators).
class ConvexBody {
 public:
  static ConvexBody ball(int n, double radius = 1.0) { return analytic(BodyKind::Ball, n, radius); }
  static ConvexBody cube(int n, double radius = 1.0) { return analytic(BodyKind::Cube, n, radius); }
  static ConvexBody cross_polytope(int n, double radius = 1.0) {
    return analytic(BodyKind::CrossPolytope, n, radius);
  }
  static ConvexBody vpolytope(const std::vector<Vector>& vertices) {
    return from_points(BodyKind::VPolytope, vertices);
  }
  static ConvexBody zonotope_one_sided(const std::vector<Vector>& generators) {
    return from_points(BodyKind::ZonotopeOneSided, generators);
  }
  static ConvexBody zonotope_symmetric(const std::vector<Vector>& generators) {
    return from_points(BodyKind::ZonotopeSymmetric, generators);
  }
  static ConvexBody from_points(BodyKind kind, const std::vector<Vector>& pts) {
    require(!pts.empty(), std::string(to_string(kind)) + ": needs at least one point");
    const Eigen::Index n = pts.front().size();
    require(n >= 1, "body dimension must be >= 1");
    Matrix m(n, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) {
      require_dim(pts[j], n, "body point");
      require(all_finite(pts[j]), "body point has non-finite coordinate");
      m.col(static_cast<Eigen::Index>(j)) = pts[j];
    }
    return from_matrix(kind, std::move(m));
  }
  static ConvexBody from_matrix(BodyKind kind, Matrix pts) {
    require(kind == BodyKind::VPolytope || kind == BodyKind::ZonotopeOneSided ||
                kind == BodyKind::ZonotopeSymmetric,
            "from_matrix: analytic body kinds take a radius");
    ConvexBody b;
    b.kind_ = kind;
    b.dim_ = static_cast<int>(pts.rows());
    b.points_ = std::make_shared<const Matrix>(std::move(pts));
    b.classify();
    return b;
  }

  BodyKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }
  bool is_analytic() const { return points_ == nullptr; }
  /// Vertices (VPolytope) or generators (zonotopes), one per column.
  const Matrix& points() const {
    require(points_ != nullptr, "analytic body has no point list");
    return *points_;
  }
  std::vector<Vector> point_list() const {
    std::vector<Vector> out;
    for (Eigen::Index j = 0; j < points().cols(); ++j) out.emplace_back(points().col(j));
    return out;
  }
  /// Full-dimensional (affinely spanning for VPolytope, spanning for zonotopes).
  bool full_dimensional() const { return full_dim_; }
  bool degenerate() const { return !full_dim_; }
  bool origin_interior() const { return origin_interior_; }
  bool is_symmetric() const { return symmetric_; }
  /// Inverse second-moment matrix of the generators of a full-dimensional
  /// zonotope; M^-1 x approximates the facet normal hit by the ray to x.
  const Matrix* moment_inverse() const { return moment_inv_.get(); }
  /// Column norms of points(), kept for zonotopes.
  const Vector* point_norms() const { return point_norms_.get(); }

  ConvexBody scaled(double s) const {
    require(s > 0.0, "scale must be positive");
    if (is_analytic()) return analytic(kind_, dim_, radius_ * s);
    return from_matrix(kind_, Matrix(points() * s));
  }

 private:
  static ConvexBody analytic(BodyKind kind, int n, double radius) {
    require(n >= 1, "body dimension must be >= 1");
    require(radius > 0.0 && std::isfinite(radius), "radius must be positive and finite");
    ConvexBody b;
    b.kind_ = kind;
    b.dim_ = n;
    b.radius_ = radius;
    b.full_dim_ = b.origin_interior_ = b.symmetric_ = true;
    return b;
  }

  void classify() {
    const Matrix& p = *points_;
    const Eigen::Index n = p.rows();
    switch (kind_) {
      case BodyKind::VPolytope:
        full_dim_ = affine_rank(p) == n;
        origin_interior_ = full_dim_ && origin_in_relative_interior(p);
        symmetric_ = closed_under_negation(p);
        break;
      case BodyKind::ZonotopeOneSided:
        full_dim_ = linear_rank(p) == n;
        // 0 is interior iff the generators positively span R^n.
        origin_interior_ = full_dim_ && origin_in_relative_interior(p);
        symmetric_ = p.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff());
        break;
      case BodyKind::ZonotopeSymmetric:
        full_dim_ = linear_rank(p) == n;
        origin_interior_ = full_dim_;
        symmetric_ = true;
        break;
      default: break;
    }
    if (full_dim_ && (kind_ == BodyKind::ZonotopeOneSided || kind_ == BodyKind::ZonotopeSymmetric)) {
      Matrix moment = p * p.transpose();
      moment_inv_ = std::make_shared<const Matrix>(moment.ldlt().solve(Matrix::Identity(n, n)));
      point_norms_ = std::make_shared<const Vector>(p.colwise().norm().transpose());
    }
  }

  static bool closed_under_negation(const Matrix& p) {
    double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < p.cols(); ++i) {
      bool found = false;
      for (Eigen::Index j = 0; j < p.cols() && !found; ++j) {
        found = (p.col(i) + p.col(j)).cwiseAbs().maxCoeff() <= 1e-12 * scale;
      }
      if (!found) return false;
    }
    return true;
  }

  BodyKind kind_ = BodyKind::Ball;
  int dim_ = 1;
  double radius_ = 1.0;
  std::shared_ptr<const Matrix> points_;
  std::shared_ptr<const Matrix> moment_inv_;  // (sum g g^T)^-1 for zonotopes
  std::shared_ptr<const Vector> point_norms_;
  bool full_dim_ = false;
  bool origin_interior_ = false;
  bool symmetric_ = false;
};

inline void check_direction(const ConvexBody& body, const Vector& theta) {
  require_dim(theta, body.dim(), "direction");
  if (!(theta.cwiseAbs().maxCoeff() > 0.0)) throw DomainError("support: zero direction");
}

/// h_K(theta) = sup_{x in K} <x, theta>.
inline double support(const ConvexBody& body, const Vector& theta) {
  check_direction(body, theta);
  switch (body.kind()) {
    case BodyKind::Ball: return body.radius() * theta.norm();
    case BodyKind::Cube: return body.radius() * theta.lpNorm<1>();
    case BodyKind::CrossPolytope: return body.radius() * theta.lpNorm<Eigen::Infinity>();
    case BodyKind::VPolytope: return (body.points().transpose() * theta).maxCoeff();
    case BodyKind::ZonotopeOneSided:
      return (body.points().transpose() * theta).cwiseMax(0.0).sum();
    case BodyKind::ZonotopeSymmetric: return (body.points().transpose() * theta).cwiseAbs().sum();
  }
  return 0.0;
}

/// A point of the body attaining the support value in direction theta.
inline Vector support_point(const ConvexBody& body, const Vector& theta) {
  check_direction(body, theta);
  const Eigen::Index n = body.dim();
  Vector v = Vector::Zero(n);
  switch (body.kind()) {
    case BodyKind::Ball: return body.radius() * theta / theta.norm();
    case BodyKind::Cube:
      for (Eigen::Index i = 0; i < n; ++i) v(i) = theta(i) >= 0.0 ? body.radius() : -body.radius();
      return v;
    case BodyKind::CrossPolytope: {
      Eigen::Index k;
      theta.cwiseAbs().maxCoeff(&k);
      v(k) = theta(k) >= 0.0 ? body.radius() : -body.radius();
      return v;
    }
    case BodyKind::VPolytope: {
      Eigen::Index k;
      (body.points().transpose() * theta).maxCoeff(&k);
      return body.points().col(k);
    }
    case BodyKind::ZonotopeOneSided: {
      Vector levels = body.points().transpose() * theta;
      for (Eigen::Index j = 0; j < levels.size(); ++j)
        if (levels(j) > 0.0) v += body.points().col(j);
      return v;
    }
    case BodyKind::ZonotopeSymmetric: {
      Vector levels = body.points().transpose() * theta;
      for (Eigen::Index j = 0; j < levels.size(); ++j)
        v += (levels(j) >= 0.0 ? 1.0 : -1.0) * body.points().col(j);
      return v;
    }
  }
  return v;
}

namespace detail {

inline void require_interior(const ConvexBody& body) {
  if (!body.origin_interior()) {
    throw DomainError(std::string("gauge: origin is not an interior point of the ") + to_string(body.kind()));
  }
}

inline double gauge_vpolytope_lp(const Matrix& vertices, const Vector& x) {
  LpProblem lp;
  lp.sense = LpSense::Minimize;
  lp.objective = Vector::Ones(vertices.cols());
  lp.eq_matrix = vertices;
  lp.eq_rhs = x;
  auto r = lp_solve(lp);
  if (!r.optimal()) throw NumericalError("gauge: LP failed for vpolytope");
  return r.objective;
}

}  // namespace detail

/// Zonotope gauge via the primal LP: min t with x = sum b_i y_i and
/// 0 <= b_i <= t (one-sided) or |b_i| <= t (symmetric).
inline double gauge_zonotope_lp(const ConvexBody& body, const Vector& x) {
  detail::require_interior(body);
  const Matrix& y = body.points();
  const Eigen::Index n = y.rows(), m = y.cols();
  const bool symmetric = body.kind() == BodyKind::ZonotopeSymmetric;
  LpProblem lp;
  lp.sense = LpSense::Minimize;
  lp.objective = Vector::Zero(m + 1);
  lp.objective(m) = 1.0;
  lp.eq_matrix = Matrix::Zero(n, m + 1);
  lp.eq_matrix.leftCols(m) = y;
  lp.eq_rhs = x;
  const Eigen::Index rows = symmetric ? 2 * m : m;
  lp.le_matrix = Matrix::Zero(rows, m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    lp.le_matrix(i, i) = 1.0;
    lp.le_matrix(i, m) = -1.0;
    if (symmetric) {
      lp.le_matrix(m + i, i) = -1.0;
      lp.le_matrix(m + i, m) = -1.0;
    }
  }
  lp.le_rhs = Vector::Zero(rows);
  lp.lower = Vector::Zero(m + 1);
  if (symmetric) lp.lower.head(m).setConstant(-detail::kInf);
  auto r = lp_solve(lp);
  if (!r.optimal()) throw NumericalError("gauge: LP failed for zonotope");
  return r.objective;
}

/// Zonotope gauge by ray shooting: 1/gauge = max s with s x = sum g_j c_j,
/// c_j in [lo, 1] (lo = -1 symmetric, 0 one-sided). Generators far from the
/// hyperplane orthogonal to the current dual direction are pinned at the
/// bound their sign dictates; the LP runs on the rest. The LP multipliers
/// give a direction theta whose ratio <x,theta>/h(theta) is a lower bound,
/// 1/s is an upper bound, and the iteration grows the free set with sign
/// violators until the two meet.
inline double gauge_zonotope_active_set(const ConvexBody& body, const Vector& x, double rel_gap = 1e-12) {
  detail::require_interior(body);
  const Matrix& g = body.points();
  const Eigen::Index n = g.rows(), m = g.cols();
  if (x.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const bool symmetric = body.kind() == BodyKind::ZonotopeSymmetric;
  const double lo = symmetric ? -1.0 : 0.0;
  const Vector gnorm = g.colwise().norm().transpose();

  Vector theta = x;
  std::vector<char> is_free(static_cast<std::size_t>(m), 0);
  Eigen::Index want = std::min<Eigen::Index>(m, std::max<Eigen::Index>(4 * n + 4, m / 16));
  double best_lower = 0.0;
  for (int round = 0; round < 64; ++round) {
    Vector levels = g.transpose() * theta;
    // Free set: the `want` generators closest to the hyperplane theta^perp,
    // plus everything already free.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto closeness = [&](Eigen::Index j) { return gnorm(j) > 0.0 ? std::abs(levels(j)) / gnorm(j) : 0.0; };
    if (want < m) {
      std::nth_element(order.begin(), order.begin() + want, order.end(), [&](Eigen::Index a, Eigen::Index b) {
        double ca = closeness(a), cb = closeness(b);
        return ca < cb || (ca == cb && a < b);
      });
      for (Eigen::Index k = 0; k < want; ++k) is_free[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = 1;
    } else {
      std::fill(is_free.begin(), is_free.end(), 1);
    }
    std::vector<Eigen::Index> free_cols;
    Vector pinned = Vector::Zero(n);
    std::vector<double> pinned_value(static_cast<std::size_t>(m), 0.0);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (is_free[static_cast<std::size_t>(j)]) {
        free_cols.push_back(j);
      } else {
        double c = levels(j) > 0.0 ? 1.0 : lo;
        pinned_value[static_cast<std::size_t>(j)] = c;
        if (c != 0.0) pinned += c * g.col(j);
      }
    }
    const auto k = static_cast<Eigen::Index>(free_cols.size());
    LpProblem lp;
    lp.sense = LpSense::Maximize;
    lp.objective = Vector::Zero(k + 1);
    lp.objective(k) = 1.0;
    lp.eq_matrix = Matrix(n, k + 1);
    // Columns guessed to sit at the upper bound are flipped, c = lo + 1 - c',
    // so the simplex starts from the sign pattern of theta.
    std::vector<char> flipped(static_cast<std::size_t>(k), 0);
    Vector rhs = -pinned;
    for (Eigen::Index c = 0; c < k; ++c) {
      const Eigen::Index j = free_cols[static_cast<std::size_t>(c)];
      if (levels(j) > 0.0) {
        flipped[static_cast<std::size_t>(c)] = 1;
        lp.eq_matrix.col(c) = -g.col(j);
        rhs -= (lo + 1.0) * g.col(j);
      } else {
        lp.eq_matrix.col(c) = g.col(j);
      }
    }
    lp.eq_matrix.col(k) = -x;
    lp.eq_rhs = rhs;
    lp.lower = Vector::Constant(k + 1, lo);
    lp.lower(k) = 0.0;
    lp.upper = Vector::Ones(k + 1);
    lp.upper(k) = detail::kInf;
    auto r = lp_solve(lp);
    if (r.status == LpStatus::Unbounded) throw NumericalError("gauge: zonotope ray LP unbounded");
    if (!r.optimal()) {
      if (want >= m) throw NumericalError("gauge: zonotope ray LP infeasible with all generators free");
      want = std::min(m, 2 * want);
      continue;
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (flipped[static_cast<std::size_t>(c)]) r.x(c) = lo + 1.0 - r.x(c);
    }
    const double s = r.objective;
    if (!(s > 0.0)) throw NumericalError("gauge: zonotope ray LP returned nonpositive scale");
    const double upper = 1.0 / s;
    Vector y = r.duals;
    if (y.dot(x) < 0.0) y = -y;
    if (y.cwiseAbs().maxCoeff() > 0.0 && y.dot(x) > 0.0) {
      double h = support(body, y);
      if (h > 0.0) best_lower = std::max(best_lower, x.dot(y) / h);
      theta = y;
    }
    // Polish: for generic x the ray exits through a facet spanned by the
    // n - 1 fractional generators, whose normal gives the exact value.
    std::vector<Eigen::Index> fractional;
    for (Eigen::Index c = 0; c < k; ++c) {
      if (r.x(c) > lo + 1e-9 && r.x(c) < 1.0 - 1e-9) fractional.push_back(free_cols[static_cast<std::size_t>(c)]);
    }
    if (static_cast<Eigen::Index>(fractional.size()) == n - 1) {
      Matrix span(n, n - 1);
      for (Eigen::Index c = 0; c < n - 1; ++c) span.col(c) = g.col(fractional[static_cast<std::size_t>(c)]);
      Eigen::JacobiSVD<Matrix> svd(span, Eigen::ComputeFullU);
      Vector nu = svd.matrixU().col(n - 1);
      if (nu.dot(x) < 0.0) nu = -nu;
      double h = support(body, nu);
      if (h > 0.0 && nu.dot(x) > 0.0) {
        double cand = x.dot(nu) / h;
        if (cand > best_lower) {
          best_lower = cand;
          theta = nu;
        }
      }
    }
    if (upper - best_lower <= rel_gap * upper) return best_lower;
    // Unpin generators whose sign disagrees with the new direction.
    Vector new_levels = g.transpose() * theta;
    Eigen::Index added = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (is_free[static_cast<std::size_t>(j)]) continue;
      double want_c = new_levels(j) > 0.0 ? 1.0 : lo;
      if (want_c != pinned_value[static_cast<std::size_t>(j)] || std::abs(new_levels(j)) <= 1e-12 * gnorm(j) * theta.norm()) {
        is_free[static_cast<std::size_t>(j)] = 1;
        ++added;
      }
    }
    if (added == 0) {
      // Pins agree with the dual direction, so the reduced LP optimum is a
      // full optimum; the remaining gap is rounding.
      if (upper - best_lower <= 1e-9 * upper) return best_lower;
      want = std::min(m, 2 * want);
    }
  }
  throw NumericalError("gauge: zonotope active-set iteration did not converge");
}

namespace detail {

// Orthonormal basis of the complement of span(cols).
inline Matrix complement_basis(const Matrix& cols) {
  const Eigen::Index n = cols.rows();
  Eigen::ColPivHouseholderQR<Matrix> qr(cols);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q.rightCols(n - qr.rank());
}

// Vertex walk for min <c, nu> + sum_k |<u_k, nu>| subject to <x, nu> = 1,
// started from the index set `s` (grown to n - 1 elements if shorter).
// `nu` is the starting point (any vector with <x, nu> = 1; empty means
// x / |x|^2). On success it is the facet normal scaled to <x, nu> = 1. Unbounded
// means a line search ran out of breakpoints, which happens when `u` is
// only part of the generators; `nu` is then the last iterate.
enum class WalkStatus { Optimal, Unbounded, Stalled };

inline WalkStatus facet_walk(const Matrix& u, const Vector& c, const Vector& x, std::vector<Eigen::Index>& s,
                             Vector& nu) {
  const Eigen::Index n = x.size(), m = u.cols();
  std::vector<char> in_s(static_cast<std::size_t>(m), 0);
  for (auto k : s) in_s[static_cast<std::size_t>(k)] = 1;
  auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
  auto complement = [&](bool with_x) {
    Matrix span(n, static_cast<Eigen::Index>(s.size()) + (with_x ? 1 : 0));
    Eigen::Index col = 0;
    if (with_x) span.col(col++) = x;
    for (auto k : s) span.col(col++) = u.col(k);
    return complement_basis(span);
  };
  if (nu.size() != n) nu = x / x.squaredNorm();
  if (static_cast<Eigen::Index>(s.size()) == n - 1) {
    Vector normal = complement(false).col(0);
    if (normal.dot(x) != 0.0) nu = normal / normal.dot(x);
  }
  Vector a = u.transpose() * nu;
  for (auto k : s) a(k) = 0.0;

  // Moves nu along d (with <x, d> = 0 and <u_k, d> = 0 on S) to the first
  // breakpoint where the slope turns nonnegative; `force` steps to the
  // first breakpoint regardless.
  auto line_search = [&](const Vector& d, bool force) -> Eigen::Index {
    Vector b = u.transpose() * d;
    double slope = c.dot(d);
    std::vector<std::pair<double, Eigen::Index>> breaks;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (in_s[static_cast<std::size_t>(k)] || b(k) == 0.0) continue;
      if (a(k) == 0.0) {
        slope += std::abs(b(k));
        continue;
      }
      slope += sgn(a(k)) * b(k);
      if (a(k) * b(k) < 0.0) breaks.emplace_back(-a(k) / b(k), k);
    }
    if (slope >= 0.0 && !force) return -1;
    // Usually only the first few breakpoints are needed: pick those by a
    // minimum scan, then sort in growing chunks.
    constexpr std::size_t kScan = 4;
    std::size_t sorted = 0;
    for (std::size_t i = 0; i < breaks.size(); ++i) {
      if (i < kScan) {
        std::iter_swap(breaks.begin() + static_cast<std::ptrdiff_t>(i),
                       std::min_element(breaks.begin() + static_cast<std::ptrdiff_t>(i), breaks.end()));
        sorted = i + 1;
      } else if (i == sorted) {
        std::size_t next = std::min(breaks.size(), std::max<std::size_t>(2 * sorted, 16));
        std::nth_element(breaks.begin() + static_cast<std::ptrdiff_t>(sorted),
                         breaks.begin() + static_cast<std::ptrdiff_t>(next - 1), breaks.end());
        std::sort(breaks.begin() + static_cast<std::ptrdiff_t>(sorted), breaks.begin() + static_cast<std::ptrdiff_t>(next));
        sorted = next;
      }
      auto [alpha, k] = breaks[i];
      slope += 2.0 * std::abs(b(k));
      if (slope >= 0.0 || force) {
        nu += alpha * d;
        a += alpha * b;
        a(k) = 0.0;
        return k;
      }
    }
    return -1;
  };

  while (static_cast<Eigen::Index>(s.size()) < n - 1) {
    Matrix q = complement(true);
    Vector p = c;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!in_s[static_cast<std::size_t>(k)]) p += sgn(a(k)) * u.col(k);
    }
    Vector d = -(q * (q.transpose() * p));
    if (d.norm() <= 1e-14 * std::max(1.0, p.norm())) d = q.col(0);
    Eigen::Index k = line_search(d, false);
    if (k < 0) k = line_search(Vector(-d), false);
    if (k < 0) k = line_search(d, true);
    if (k < 0) return WalkStatus::Unbounded;
    in_s[static_cast<std::size_t>(k)] = 1;
    s.push_back(k);
  }

  const int cap = 50 * static_cast<int>(n) + 200;
  for (int it = 0; it < cap; ++it) {
    // Re-derive nu from S so that rounding does not accumulate.
    std::sort(s.begin(), s.end());
    Vector normal = complement(false).col(0);
    if (normal.dot(x) == 0.0) return WalkStatus::Stalled;
    if (normal.dot(x) < 0.0) normal = -normal;
    nu = normal / normal.dot(x);
    a = u.transpose() * nu;
    for (auto k : s) a(k) = 0.0;
    // Multipliers: sum_S t_k u_k - lambda x = -(c + sum_{not S} sign u_k).
    Vector rhs = -c;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!in_s[static_cast<std::size_t>(k)]) rhs -= sgn(a(k)) * u.col(k);
    }
    Matrix sys(n, n);
    for (std::size_t col = 0; col < s.size(); ++col) sys.col(static_cast<Eigen::Index>(col)) = u.col(s[col]);
    sys.col(n - 1) = -x;
    Vector sol = sys.fullPivLu().solve(rhs);
    std::size_t worst = 0;
    for (std::size_t col = 1; col < s.size(); ++col) {
      if (std::abs(sol(static_cast<Eigen::Index>(col))) > std::abs(sol(static_cast<Eigen::Index>(worst)))) worst = col;
    }
    const double tw = sol(static_cast<Eigen::Index>(worst));
    if (std::abs(tw) <= 1.0 + 1e-12) return WalkStatus::Optimal;
    const Eigen::Index j = s[worst];
    s.erase(s.begin() + static_cast<std::ptrdiff_t>(worst));
    in_s[static_cast<std::size_t>(j)] = 0;
    Vector d = complement(true).col(0);
    if (u.col(j).dot(d) * tw < 0.0) d = -d;
    Eigen::Index k = line_search(d, false);
    if (k < 0) {
      s.push_back(j);
      return WalkStatus::Unbounded;
    }
    in_s[static_cast<std::size_t>(k)] = 1;
    s.push_back(k);
  }
  return WalkStatus::Stalled;
}

}  // namespace detail

/// Exact zonotope gauge through min { h(nu) : <x, nu> = 1 }. Writing
/// Z = c0 + sum [-u_k, u_k], h is <c0, nu> + sum |<u_k, nu>|, convex and
/// piecewise linear, minimized at a facet normal orthogonal to n - 1 of
/// the u_k. The walk runs on the generators nearest to the current normal
/// with the others pinned to their signs, and widens that set until every
/// pinned sign agrees with the result. Returns nullopt when the walk
/// stalls; callers fall back to the LP.
inline std::optional<double> gauge_zonotope_walk(const ConvexBody& body, const Vector& x) {
  detail::require_interior(body);
  const Eigen::Index n = x.size();
  if (x.cwiseAbs().maxCoeff() == 0.0) return 0.0;
  const bool symmetric = body.kind() == BodyKind::ZonotopeSymmetric;
  const double half = symmetric ? 1.0 : 0.5;
  const Matrix& g = body.points();
  const Eigen::Index m = g.cols();
  const Vector c0 = symmetric ? Vector(Vector::Zero(n)) : Vector(half * g.rowwise().sum());
  auto h_of = [&](const Vector& nu) {
    return c0.dot(nu) + half * (g.transpose() * nu).cwiseAbs().sum();
  };
  if (n == 1) return std::abs(x(0)) / h_of(make_vector({x(0) > 0.0 ? 1.0 : -1.0}));

  Vector own_norms;
  if (!body.point_norms()) own_norms = g.colwise().norm().transpose();
  const Vector& gnorm = body.point_norms() ? *body.point_norms() : own_norms;
  Vector theta = body.moment_inverse() ? Vector(*body.moment_inverse() * x) : x;
  if (!(theta.dot(x) > 0.0)) theta = x;
  Vector nu = theta / theta.dot(x);
  Eigen::Index want = std::min<Eigen::Index>(m, std::max<Eigen::Index>(8 * n + 16, m / 16));
  std::vector<char> is_free(static_cast<std::size_t>(m));
  std::vector<Eigen::Index> free_cols;
  std::vector<Eigen::Index> local_of(static_cast<std::size_t>(m));
  std::vector<Eigen::Index> s_global;  // facet set, as generator indices
  std::vector<std::pair<double, Eigen::Index>> closeness(static_cast<std::size_t>(m));
  for (int round = 0; round < 64; ++round) {
    // Free the generators closest to theta^perp (and the current facet set);
    // pin the rest to their sign at theta.
    Vector levels = g.transpose() * theta;
    for (Eigen::Index j = 0; j < m; ++j) {
      closeness[static_cast<std::size_t>(j)] = {gnorm(j) > 0.0 ? std::abs(levels(j)) / gnorm(j) : 0.0, j};
    }
    if (want < m) {
      std::nth_element(closeness.begin(), closeness.begin() + (want - 1), closeness.end());
    }
    std::fill(is_free.begin(), is_free.end(), 0);
    for (Eigen::Index k = 0; k < want; ++k) is_free[static_cast<std::size_t>(closeness[static_cast<std::size_t>(k)].second)] = 1;
    for (auto j : s_global) is_free[static_cast<std::size_t>(j)] = 1;
    Vector pin(m);
    free_cols.clear();
    for (Eigen::Index j = 0; j < m; ++j) {
      if (is_free[static_cast<std::size_t>(j)]) {
        pin(j) = 0.0;
        local_of[static_cast<std::size_t>(j)] = static_cast<Eigen::Index>(free_cols.size());
        free_cols.push_back(j);
      } else {
        pin(j) = levels(j) > 0.0 ? half : -half;
      }
    }
    const Vector c = c0 + g * pin;
    const auto k = static_cast<Eigen::Index>(free_cols.size());
    Matrix u(n, k);
    for (Eigen::Index col = 0; col < k; ++col) u.col(col) = half * g.col(free_cols[static_cast<std::size_t>(col)]);
    std::vector<Eigen::Index> s;
    for (auto j : s_global) s.push_back(local_of[static_cast<std::size_t>(j)]);

    auto status = detail::facet_walk(u, c, x, s, nu);
    if (status == detail::WalkStatus::Stalled) return std::nullopt;
    s_global.clear();
    for (auto l : s) s_global.push_back(free_cols[static_cast<std::size_t>(l)]);
    if (status == detail::WalkStatus::Unbounded) {
      if (k == m) return std::nullopt;
      want = std::min(m, 2 * want);
      theta = nu;
      continue;
    }
    // Done once every pinned generator keeps its sign at the new normal.
    Vector at_nu = g.transpose() * nu;
    bool agree = true;
    for (Eigen::Index j = 0; j < m && agree; ++j) {
      if (pin(j) != 0.0 && at_nu(j) * pin(j) <= 1e-12 * gnorm(j) * nu.norm()) agree = false;
    }
    if (agree) {
      const double h = h_of(nu);
      if (!(h > 0.0)) return std::nullopt;
      return x.dot(nu) / h;
    }
    theta = nu;
    if (round % 2 == 1) want = std::min(m, 2 * want);
  }
  return std::nullopt;
}

/// ||x||_K = min { t >= 0 : x in tK }.
inline double gauge(const ConvexBody& body, const Vector& x) {
  require_dim(x, body.dim(), "gauge point");
  switch (body.kind()) {
    case BodyKind::Ball: return x.norm() / body.radius();
    case BodyKind::Cube: return x.lpNorm<Eigen::Infinity>() / body.radius();
    case BodyKind::CrossPolytope: return x.lpNorm<1>() / body.radius();
    case BodyKind::VPolytope:
      detail::require_interior(body);
      if (x.cwiseAbs().maxCoeff() == 0.0) return 0.0;
      return detail::gauge_vpolytope_lp(body.points(), x);
    case BodyKind::ZonotopeOneSided:
    case BodyKind::ZonotopeSymmetric:
      if (x.cwiseAbs().maxCoeff() == 0.0) {
        detail::require_interior(body);
        return 0.0;
      }
      if (body.points().cols() <= 48) return gauge_zonotope_lp(body, x);
      if (auto w = gauge_zonotope_walk(body, x)) return *w;
      return gauge_zonotope_active_set(body, x);
  }
  return 0.0;
}

struct Box {
  Vector lo;
  Vector hi;
  double volume() const { return (hi - lo).prod(); }
};

inline Box bounding_box(const ConvexBody& body) {
  const Eigen::Index n = body.dim();
  Box box;
  if (body.is_analytic()) {
    box.lo = Vector::Constant(n, -body.radius());
    box.hi = Vector::Constant(n, body.radius());
    return box;
  }
  const Matrix& p = body.points();
  switch (body.kind()) {
    case BodyKind::VPolytope:
      box.lo = p.rowwise().minCoeff();
      box.hi = p.rowwise().maxCoeff();
      break;
    case BodyKind::ZonotopeOneSided:
      box.lo = p.cwiseMin(0.0).rowwise().sum();
      box.hi = p.cwiseMax(0.0).rowwise().sum();
      break;
    default:
      box.hi = p.cwiseAbs().rowwise().sum();
      box.lo = -box.hi;
      break;
  }
  return box;
}

inline double diameter_bound(const ConvexBody& body) {
  Box b = bounding_box(body);
  return (b.hi - b.lo).norm();
}

/// Cube and cross-polytope as explicit vertex lists.
inline std::optional<ConvexBody> as_vpolytope(const ConvexBody& body, std::size_t max_vertices = 1024) {
  const int n = body.dim();
  const double r = body.radius();
  switch (body.kind()) {
    case BodyKind::VPolytope: return body;
    case BodyKind::CrossPolytope: {
      std::vector<Vector> v;
      for (int i = 0; i < n; ++i) {
        v.push_back(r * unit(n, i));
        v.push_back(-r * unit(n, i));
      }
      return ConvexBody::vpolytope(v);
    }
    case BodyKind::Cube: {
      if (n >= 63 || (std::size_t{1} << n) > max_vertices) return std::nullopt;
      std::vector<Vector> v;
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Vector p(n);
        for (int i = 0; i < n; ++i) p(i) = (mask >> i) & 1 ? r : -r;
        v.push_back(p);
      }
      return ConvexBody::vpolytope(v);
    }
    default: return std::nullopt;
  }
}

/// Calls fn(indices) for every k-subset of {0..m-1} in lexicographic order;
/// stops early when fn returns false.
template <class Fn>
void for_each_combination(int m, int k, Fn&& fn) {
  if (k > m || k < 0) return;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!fn(static_cast<const std::vector<int>&>(idx))) return;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline double binomial(int m, int k) {
  if (k < 0 || k > m) return 0.0;
  return std::exp(std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0));
}

/// Unit vector orthogonal to the n-1 columns of `vecs` (n x (n-1)), or
/// nullopt when they are linearly dependent.
inline std::optional<Vector> orthogonal_complement_1d(const Matrix& vecs) {
  const Eigen::Index n = vecs.rows();
  if (n == 1) return make_vector({1.0});
  if (n == 2) {
    Vector v = make_vector({-vecs(1, 0), vecs(0, 0)});
    double nv = v.norm();
    if (!(nv > 1e-12 * std::max(1.0, vecs.cwiseAbs().maxCoeff()))) return std::nullopt;
    return Vector(v / nv);
  }
  if (n == 3) {
    Eigen::Vector3d a = vecs.col(0), b = vecs.col(1);
    Eigen::Vector3d c = a.cross(b);
    double nc = c.norm();
    if (!(nc > 1e-12 * a.norm() * b.norm()) || !(nc > 0.0)) return std::nullopt;
    return Vector(c / nc);
  }
  Eigen::FullPivLU<Matrix> lu(vecs.transpose());
  lu.setThreshold(1e-10);
  if (lu.rank() != n - 1) return std::nullopt;
  Vector k = lu.kernel().col(0);
  return Vector(k / k.norm());
}

/// Halfspaces a_i . x <= b_i with unit a_i.
struct HRep {
  Matrix a;
  Vector b;
  bool contains(const Vector& x, double tol = 1e-12) const {
    return ((a * x - b).array() <= tol * (1.0 + b.cwiseAbs().array())).all();
  }
};

namespace detail {

inline void push_unique_halfspace(std::vector<Vector>& normals, std::vector<double>& offsets, const Vector& a, double b) {
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if ((normals[i] - a).cwiseAbs().maxCoeff() <= 1e-9 && std::abs(offsets[i] - b) <= 1e-9 * std::max(1.0, std::abs(b))) return;
  }
  normals.push_back(a);
  offsets.push_back(b);
}

inline HRep pack(const std::vector<Vector>& normals, const std::vector<double>& offsets, Eigen::Index n) {
  HRep h;
  h.a = Matrix(static_cast<Eigen::Index>(normals.size()), n);
  h.b = Vector(static_cast<Eigen::Index>(normals.size()));
  for (std::size_t i = 0; i < normals.size(); ++i) {
    h.a.row(static_cast<Eigen::Index>(i)) = normals[i].transpose();
    h.b(static_cast<Eigen::Index>(i)) = offsets[i];
  }
  return h;
}

}  // namespace detail

/// Unit facet normals of a zonotope, one per sign class: each is the
/// normal of a hyperplane spanned by n-1 generators. Nullopt when there
/// would be more than `max_subsets` subsets to scan.
inline std::optional<std::vector<Vector>> zonotope_facet_normals(const Matrix& generators, double max_subsets = 2e5) {
  const auto n = static_cast<int>(generators.rows()), m = static_cast<int>(generators.cols());
  if (binomial(m, n - 1) > max_subsets) return std::nullopt;
  std::vector<Vector> normals;
  if (n == 1) {
    normals.push_back(make_vector({1.0}));
    return normals;
  }
  Matrix pick(n, n - 1);
  for_each_combination(m, n - 1, [&](const std::vector<int>& idx) {
    for (int c = 0; c < n - 1; ++c) pick.col(c) = generators.col(idx[static_cast<std::size_t>(c)]);
    auto nu = orthogonal_complement_1d(pick);
    if (!nu) return true;
    Vector v = *nu;
    // Canonical sign: first clearly nonzero coordinate positive.
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    bool seen = false;
    for (const auto& w : normals) {
      if ((w - v).cwiseAbs().maxCoeff() <= 1e-10) {
        seen = true;
        break;
      }
    }
    if (!seen) normals.push_back(v);
    return true;
  });
  return normals;
}

/// Exact H-representation for polytopes in low dimension: brute force over
/// vertex n-subsets (V-polytopes) or generator (n-1)-subsets (zonotopes).
inline std::optional<HRep> halfspaces(const ConvexBody& body, double max_subsets = 2e5) {
  const int n = body.dim();
  std::vector<Vector> normals;
  std::vector<double> offsets;
  switch (body.kind()) {
    case BodyKind::Cube:
      for (int i = 0; i < n; ++i) {
        normals.push_back(unit(n, i));
        offsets.push_back(body.radius());
        normals.push_back(-unit(n, i));
        offsets.push_back(body.radius());
      }
      return detail::pack(normals, offsets, n);
    case BodyKind::CrossPolytope: {
      if (n > 16) return std::nullopt;
      const double s = 1.0 / std::sqrt(static_cast<double>(n));
      for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        Vector a(n);
        for (int i = 0; i < n; ++i) a(i) = (mask >> i) & 1 ? -s : s;
        normals.push_back(a);
        offsets.push_back(body.radius() * s);
      }
      return detail::pack(normals, offsets, n);
    }
    case BodyKind::VPolytope: {
      if (!body.full_dimensional()) return std::nullopt;
      const Matrix& v = body.points();
      const auto m = static_cast<int>(v.cols());
      if (binomial(m, n) > max_subsets) return std::nullopt;
      const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
      Matrix diff(n, n - 1);
      for_each_combination(m, n, [&](const std::vector<int>& idx) {
        for (int c = 1; c < n; ++c) diff.col(c - 1) = v.col(idx[static_cast<std::size_t>(c)]) - v.col(idx[0]);
        auto nu = orthogonal_complement_1d(diff);
        if (!nu) return true;
        Vector a = *nu;
        double b = a.dot(v.col(idx[0]));
        Vector lv = v.transpose() * a;
        double band = 1e-10 * scale;
        if ((lv.array() <= b + band).all()) {
          detail::push_unique_halfspace(normals, offsets, a, b);
        } else if ((lv.array() >= b - band).all()) {
          detail::push_unique_halfspace(normals, offsets, Vector(-a), -b);
        }
        return true;
      });
      return detail::pack(normals, offsets, n);
    }
    case BodyKind::ZonotopeOneSided:
    case BodyKind::ZonotopeSymmetric: {
      if (!body.full_dimensional()) return std::nullopt;
      auto nus = zonotope_facet_normals(body.points(), max_subsets);
      if (!nus) return std::nullopt;
      for (const auto& nu : *nus) {
        normals.push_back(nu);
        offsets.push_back(support(body, nu));
        normals.push_back(-nu);
        offsets.push_back(support(body, Vector(-nu)));
      }
      return detail::pack(normals, offsets, n);
    }
    case BodyKind::Ball: return std::nullopt;
  }
  return std::nullopt;
}

/// Point-in-body test used by samplers; closed forms where available,
/// otherwise an H-representation built once by the caller.
class BodyIndicator {
 public:
  explicit BodyIndicator(const ConvexBody& body, double scale = 1.0) : body_(body), scale_(scale) {
    if (!body.is_analytic()) {
      hrep_ = halfspaces(body);
      if (!hrep_) require(body.origin_interior(), "body indicator: no H-representation and origin not interior");
    }
  }
  /// x in scale * K (closed).
  bool operator()(const Vector& x) const {
    const double r = body_.radius() * scale_;
    switch (body_.kind()) {
      case BodyKind::Ball: return x.squaredNorm() <= r * r;
      case BodyKind::Cube: return x.lpNorm<Eigen::Infinity>() <= r;
      case BodyKind::CrossPolytope: return x.lpNorm<1>() <= r;
      default: break;
    }
    if (hrep_) return ((hrep_->a * x).array() <= scale_ * hrep_->b.array()).all();
    return gauge(body_, x) <= scale_;
  }

 private:
  ConvexBody body_;
  double scale_;
  std::optional<HRep> hrep_;
};

/// Closed-form Banach-Mazur distances. Only classical pairs are tabulated.
inline double bm_known_distance(BodyKind a, BodyKind b, int n) {
  require(n >= 1, "bm_known_distance: n must be >= 1");
  auto analytic = [](BodyKind k) {
    return k == BodyKind::Ball || k == BodyKind::Cube || k == BodyKind::CrossPolytope;
  };
  if (a == b && analytic(a)) return 1.0;
  auto is_pair = [&](BodyKind x, BodyKind y) { return (a == x && b == y) || (a == y && b == x); };
  if (is_pair(BodyKind::Ball, BodyKind::CrossPolytope) || is_pair(BodyKind::Ball, BodyKind::Cube)) {
    return std::sqrt(static_cast<double>(n));
  }
  throw DomainError(std::string("bm_known_distance: pair (") + to_string(a) + ", " + to_string(b) +
                    ") is not in table");
}

}  // namespace metronoid
