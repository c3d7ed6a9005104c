#pragma once

// M(mu) for a discrete measure: the set of sum l_i x_i with 0 <= l_i <= w_i
// and sum l_i = 1. Support values come from the greedy threshold rule;
// membership, gauges and the oracles come from small LPs.

#include "metronoid/measure.hpp"
#include "metronoid/net.hpp"

#include <algorithm>
#include <limits>
#include <utility>
#include <vector>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

namespace metronoid {

struct ThresholdResult {
  double level = 0.0;  // R(theta)
  double mass_above = 0.0;
  double mass_at = 0.0;
};

class Metronoid {
 public:
  explicit Metronoid(DiscreteMeasure mu) : mu_(std::move(mu)) {
    mass_ = total_mass(mu_);
    if (mu_.empty() || mass_ < 1.0 - tol::kMass) {
      throw DomainError("metronoid: total mass " + std::to_string(mass_) + " < 1, the set is empty");
    }
    x_ = mu_.positions();
    w_ = mu_.weights();
    min_w_ = w_.minCoeff();
  }

  const DiscreteMeasure& measure() const { return mu_; }
  int dim() const { return mu_.dim(); }
  double mass() const { return mass_; }
  std::size_t size() const { return mu_.size(); }
  const Matrix& positions() const { return x_; }
  const Vector& weights() const { return w_; }
  double min_weight() const { return min_w_; }

 private:
  DiscreteMeasure mu_;
  Matrix x_;
  Vector w_;
  double mass_ = 0.0;
  double min_w_ = 0.0;
};

namespace detail {

struct Greedy {
  ThresholdResult t;
  double coef = 0.0;  // fraction of each at-level atom used
  double band = 0.0;
  Vector levels;
};

inline void check_theta(const Metronoid& m, const Vector& theta) {
  require_dim(theta, m.dim(), "direction");
  if (!(theta.cwiseAbs().maxCoeff() > 0.0)) throw DomainError("metronoid: zero direction");
}

using LevelWeight = std::pair<double, double>;

/// Weighted three-way quickselect on a[lo, hi): the level at which acc plus
/// the weight accumulated in descending order first reaches need.
inline std::optional<double> select_crossing(std::vector<LevelWeight>& a, double acc, double need) {
  std::size_t lo = 0, hi = a.size();
  while (hi - lo > 32) {
    double p0 = a[lo].first, p1 = a[lo + (hi - lo) / 2].first, p2 = a[hi - 1].first;
    double pivot = std::max(std::min(p0, p1), std::min(std::max(p0, p1), p2));
    // [lo, gt) > pivot, [gt, lt) == pivot, [lt, hi) < pivot.
    std::size_t gt = lo, i = lo, lt = hi;
    while (i < lt) {
      if (a[i].first > pivot) {
        std::swap(a[i++], a[gt++]);
      } else if (a[i].first < pivot) {
        std::swap(a[i], a[--lt]);
      } else {
        ++i;
      }
    }
    double w_gt = 0.0, w_eq = 0.0;
    for (std::size_t k = lo; k < gt; ++k) w_gt += a[k].second;
    for (std::size_t k = gt; k < lt; ++k) w_eq += a[k].second;
    if (acc + w_gt >= need) {
      hi = gt;
    } else if (acc + w_gt + w_eq >= need) {
      return pivot;
    } else {
      acc += w_gt + w_eq;
      lo = lt;
    }
  }
  std::sort(a.begin() + static_cast<std::ptrdiff_t>(lo), a.begin() + static_cast<std::ptrdiff_t>(hi),
            [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t k = lo; k < hi; ++k) {
    acc += a[k].second;
    if (acc >= need) return a[k].first;
  }
  return std::nullopt;
}

/// Level at which the weight, accumulated in descending level order, first
/// reaches 1; the minimum level when the mass is short by rounding. Large
/// inputs are first bracketed from a strided sample so that only the atoms
/// near the crossing are selected on; a missed bracket falls back to the
/// full selection.
inline double threshold_level(const Vector& levels, const Vector& w) {
  const auto count = static_cast<std::size_t>(levels.size());
  const double need = 1.0 - tol::kMass;
  thread_local std::vector<LevelWeight> a;
  auto at = [&](std::size_t i) {
    return LevelWeight{levels(static_cast<Eigen::Index>(i)), w(static_cast<Eigen::Index>(i))};
  };
  if (count > 8192) {
    thread_local std::vector<LevelWeight> sample;
    sample.clear();
    const std::size_t stride = count / 1024;
    double ws = 0.0;
    for (std::size_t i = 0; i < count; i += stride) {
      sample.push_back(at(i));
      ws += sample.back().second;
    }
    std::sort(sample.begin(), sample.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
    const double target = need / w.sum() * ws;
    std::size_t k = 0;
    for (double cum = 0.0; k + 1 < sample.size(); ++k) {
      cum += sample[k].second;
      if (cum >= target) break;
    }
    // 48 sample ranks is about 3 sigma of the crossing rank.
    const std::size_t margin = 48;
    const double upper = k >= margin ? sample[k - margin].first : detail::kInf;
    const double lower = k + margin < sample.size() ? sample[k + margin].first : -detail::kInf;
    a.clear();
    double above = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const double l = levels(static_cast<Eigen::Index>(i));
      if (l > upper) {
        above += w(static_cast<Eigen::Index>(i));
      } else if (l >= lower) {
        a.push_back(at(i));
      }
    }
    if (above < need) {
      if (auto r = select_crossing(a, above, need)) return *r;
    }
  }
  a.resize(count);
  for (std::size_t i = 0; i < count; ++i) a[i] = at(i);
  if (auto r = select_crossing(a, 0.0, need)) return *r;
  return levels.minCoeff();
}

inline Greedy greedy(const Metronoid& m, const Vector& theta) {
  check_theta(m, theta);
  Greedy g;
  g.levels = m.positions().transpose() * theta;
  const Vector& w = m.weights();
  const auto count = static_cast<std::size_t>(g.levels.size());
  const double level = threshold_level(g.levels, w);
  g.band = tol::kLevelGroup * std::max(1.0, std::abs(level));
  double above = 0.0, at = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double l = g.levels(static_cast<Eigen::Index>(i));
    if (l > level + g.band) {
      above += w(static_cast<Eigen::Index>(i));
    } else if (l >= level - g.band) {
      at += w(static_cast<Eigen::Index>(i));
    }
  }
  g.t = {level, above, at};
  g.coef = at > 0.0 ? std::clamp((1.0 - above) / at, 0.0, 1.0) : 0.0;
  return g;
}

}  // namespace detail

inline ThresholdResult threshold(const Metronoid& m, const Vector& theta) { return detail::greedy(m, theta).t; }

/// y_theta: full weight above the threshold level, a common fraction of
/// every atom at the level.
inline Vector extreme_point(const Metronoid& m, const Vector& theta) {
  auto g = detail::greedy(m, theta);
  Vector y = Vector::Zero(m.dim());
  const double level = g.t.level;
  for (Eigen::Index i = 0; i < g.levels.size(); ++i) {
    double l = g.levels(i);
    if (l > level + g.band) {
      y += m.weights()(i) * m.positions().col(i);
    } else if (l >= level - g.band && g.coef > 0.0) {
      y += (g.coef * m.weights()(i)) * m.positions().col(i);
    }
  }
  return y;
}

/// h_{M(mu)}(theta), accumulated in level space.
inline double msupport(const Metronoid& m, const Vector& theta) {
  auto g = detail::greedy(m, theta);
  const double level = g.t.level;
  double s = 0.0, at = 0.0;
  for (Eigen::Index i = 0; i < g.levels.size(); ++i) {
    double l = g.levels(i);
    if (l > level + g.band) {
      s += m.weights()(i) * l;
    } else if (l >= level - g.band) {
      at += m.weights()(i) * l;
    }
  }
  return s + g.coef * at;
}

/// LP oracle: max <sum l_i x_i, theta> over 0 <= l_i <= w_i, sum l_i = 1.
inline double msupport_lp(const Metronoid& m, const Vector& theta) {
  detail::check_theta(m, theta);
  LpProblem lp;
  lp.objective = m.positions().transpose() * theta;
  lp.eq_matrix = Matrix::Ones(1, static_cast<Eigen::Index>(m.size()));
  lp.eq_rhs = make_vector({1.0});
  lp.lower = Vector::Zero(static_cast<Eigen::Index>(m.size()));
  lp.upper = m.weights();
  auto r = lp_solve(lp);
  if (!r.optimal()) throw NumericalError("msupport_lp: LP not optimal");
  return r.objective;
}

inline std::vector<double> msupport_net(const Metronoid& m, const DirectionNet& net) {
  require(net.dim() == m.dim(), "direction net dimension mismatch");
  return parallel_map<double>(net.size(), [&](std::size_t i) { return msupport(m, net[i]); });
}

// -------------------------------------------------------------- membership

enum class MemberStatus { Inside, Boundary, Outside };

inline const char* to_string(MemberStatus s) {
  switch (s) {
    case MemberStatus::Inside: return "inside";
    case MemberStatus::Boundary: return "boundary";
    case MemberStatus::Outside: return "outside";
  }
  return "?";
}

struct MembershipCertificate {
  MemberStatus status = MemberStatus::Outside;
  Vector lambda;  // empty when outside
  double min_slack = 0.0;  // min over the net of h(theta) - <x, theta>
};

namespace detail {

inline LpResult membership_lp(const Metronoid& m, const Vector& x) {
  const auto count = static_cast<Eigen::Index>(m.size());
  const int n = m.dim();
  LpProblem lp;
  lp.objective = Vector::Zero(count);
  lp.eq_matrix = Matrix(n + 1, count);
  lp.eq_matrix.topRows(n) = m.positions();
  lp.eq_matrix.row(n).setOnes();
  lp.eq_rhs = Vector(n + 1);
  lp.eq_rhs.head(n) = x;
  lp.eq_rhs(n) = 1.0;
  lp.lower = Vector::Zero(count);
  lp.upper = m.weights();
  return lp_solve(lp);
}

}  // namespace detail

/// Feasibility of x = sum l_i x_i; a feasible point is reported on the
/// boundary when a probe x +- tau e_i leaves the set or some net direction
/// has slack <= tau.
inline MembershipCertificate membership(const Metronoid& m, const Vector& x, const DirectionNet* net = nullptr,
                                        double tau = tol::kBoundary) {
  require_dim(x, m.dim(), "membership point");
  MembershipCertificate cert;
  auto r = detail::membership_lp(m, x);
  if (!r.optimal()) {
    cert.status = MemberStatus::Outside;
    return cert;
  }
  cert.lambda = r.x;
  bool boundary = false;
  for (int i = 0; i < m.dim() && !boundary; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector probe = x + s * tau * unit(m.dim(), i);
      if (!detail::membership_lp(m, probe).optimal()) {
        boundary = true;
        break;
      }
    }
  }
  DirectionNet local = net ? *net : DirectionNet::standard(m.dim());
  auto h = msupport_net(m, local);
  cert.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < local.size(); ++k) cert.min_slack = std::min(cert.min_slack, h[k] - x.dot(local[k]));
  if (cert.min_slack <= tau) boundary = true;
  cert.status = boundary ? MemberStatus::Boundary : MemberStatus::Inside;
  return cert;
}

inline bool contains_point(const Metronoid& m, const Vector& x) { return detail::membership_lp(m, x).optimal(); }

/// ||x||_{M(mu)}: min t with x = sum l_i x_i, 0 <= l_i <= t w_i, sum l_i = t.
/// Requires 0 in the interior of M(mu).
inline double metronoid_gauge(const Metronoid& m, const Vector& x) {
  require_dim(x, m.dim(), "gauge point");
  const auto count = static_cast<Eigen::Index>(m.size());
  const int n = m.dim();
  LpProblem lp;
  lp.sense = LpSense::Minimize;
  lp.objective = Vector::Zero(count + 1);
  lp.objective(count) = 1.0;
  lp.eq_matrix = Matrix::Zero(n + 1, count + 1);
  lp.eq_matrix.topLeftCorner(n, count) = m.positions();
  lp.eq_matrix.row(n).head(count).setOnes();
  lp.eq_matrix(n, count) = -1.0;
  lp.eq_rhs = Vector::Zero(n + 1);
  lp.eq_rhs.head(n) = x;
  lp.le_matrix = Matrix::Zero(count, count + 1);
  for (Eigen::Index i = 0; i < count; ++i) {
    lp.le_matrix(i, i) = 1.0;
    lp.le_matrix(i, count) = -m.weights()(i);
  }
  lp.le_rhs = Vector::Zero(count);
  auto r = lp_solve(lp);
  if (!r.optimal()) throw DomainError("metronoid gauge: point not in the cone of M(mu)");
  return r.objective;
}

// ------------------------------------------------------- structural bounds

struct HullZonotopeBounds {
  double h_metronoid = 0.0;
  double h_hull = 0.0;
  double h_zonotope = 0.0;
  bool holds() const { return h_metronoid <= std::min(h_hull, h_zonotope) + 1e-9; }
};

inline HullZonotopeBounds hull_zonotope_bounds(const Metronoid& m, const Vector& theta) {
  HullZonotopeBounds b;
  b.h_metronoid = msupport(m, theta);
  Vector levels = m.positions().transpose() * theta;
  b.h_hull = levels.maxCoeff();
  b.h_zonotope = 0.0;
  for (Eigen::Index i = 0; i < levels.size(); ++i) b.h_zonotope += positive_part(m.weights()(i) * levels(i));
  return b;
}

/// sum over atoms with <x, theta> > 0 of w <x, theta>.
inline double positive_part_integral(const DiscreteMeasure& mu, const Vector& theta) {
  require_dim(theta, mu.dim(), "direction");
  double s = 0.0;
  for (const auto& a : mu) {
    double l = a.x.dot(theta);
    if (l > 0.0) s += a.w * l;
  }
  return s;
}

inline double positive_part_integral(const Metronoid& m, const Vector& theta) {
  return positive_part_integral(m.measure(), theta);
}

/// 1/2 sum w |<x, theta>|, valid when the measure is symmetric, has mass at
/// most 2 and origin weight at least 1.
inline double zonoid_support_symmetric(const Metronoid& m, const Vector& theta) {
  detail::check_theta(m, theta);
  const auto& mu = m.measure();
  if (!is_symmetric_measure(mu)) throw DomainError("zonoid support: measure is not symmetric");
  if (m.mass() > 2.0 + tol::kMass) throw DomainError("zonoid support: total mass exceeds 2");
  if (origin_weight(mu) < 1.0 - tol::kMass) throw DomainError("zonoid support: origin weight below 1");
  double s = 0.0;
  for (const auto& a : mu) s += a.w * std::abs(a.x.dot(theta));
  return 0.5 * s;
}

struct ZonotopeEqualityReport {
  bool equal = false;
  bool condition_met = false;  // off-origin mass <= 1 <= origin weight
  double worst_gap = 0.0;
  Vector worst_direction;
};

/// Compares h_M with the support of Z(w_i x_i) on the standard net.
inline ZonotopeEqualityReport zonotope_equality_check(const Metronoid& m, const DirectionNet* net = nullptr) {
  ZonotopeEqualityReport rep;
  const double w0 = origin_weight(m.measure());
  rep.condition_met = (m.mass() - w0) <= 1.0 + tol::kMass && w0 >= 1.0 - tol::kMass;
  DirectionNet local = net ? *net : DirectionNet::standard(m.dim());
  auto gaps = parallel_map<double>(local.size(), [&](std::size_t k) {
    return std::abs(msupport(m, local[k]) - hull_zonotope_bounds(m, local[k]).h_zonotope);
  });
  rep.worst_gap = 0.0;
  rep.worst_direction = local[0];
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    if (gaps[k] > rep.worst_gap) {
      rep.worst_gap = gaps[k];
      rep.worst_direction = local[k];
    }
  }
  rep.equal = rep.worst_gap <= 1e-9;
  return rep;
}

// -------------------------------------------------------------- containment

struct ContainmentReport {
  bool pass = false;
  bool exact = false;
  double worst_slack = 0.0;  // min over net of h_M - h_K (or min vertex margin)
  Vector witness;            // direction (net) or failing vertex (exact)
  bool screen_pass = true;   // positive-part necessary condition on the net
  double screen_worst = 0.0;
  std::size_t net_size = 0;
};

struct ContainOptions {
  double tol = tol::kBoundary;
  bool allow_exact = true;
  std::size_t exact_max_vertices = 256;
  std::size_t exact_max_atoms = 2000;
};

/// K subset M(mu), given h = msupport_net(m, net). V-polytopes (and small
/// cubes / cross-polytopes) are checked exactly by vertex membership; other
/// bodies on the net.
inline ContainmentReport contains_body_given(const Metronoid& m, const ConvexBody& body, const DirectionNet& net,
                                             const std::vector<double>& h, const ContainOptions& opt = {}) {
  require(body.dim() == m.dim() && net.dim() == m.dim(), "contains_body: dimension mismatch");
  require(h.size() == net.size(), "contains_body: support values do not match the net");
  ContainmentReport rep;
  rep.net_size = net.size();
  rep.worst_slack = std::numeric_limits<double>::infinity();
  rep.screen_worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < net.size(); ++k) {
    double hk = support(body, net[k]);
    double slack = h[k] - hk;
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.witness = net[k];
    }
    rep.screen_worst = std::min(rep.screen_worst, positive_part_integral(m, net[k]) - hk);
  }
  rep.screen_pass = rep.screen_worst >= -opt.tol;
  rep.pass = rep.worst_slack >= -opt.tol;

  if (opt.allow_exact && m.size() <= opt.exact_max_atoms) {
    std::optional<ConvexBody> poly;
    if (body.kind() == BodyKind::VPolytope) {
      poly = body;
    } else if (body.kind() == BodyKind::CrossPolytope || body.kind() == BodyKind::Cube) {
      poly = as_vpolytope(body, opt.exact_max_vertices);
    }
    if (poly && static_cast<std::size_t>(poly->points().cols()) <= opt.exact_max_vertices) {
      rep.exact = true;
      rep.pass = true;
      for (Eigen::Index j = 0; j < poly->points().cols(); ++j) {
        Vector v = poly->points().col(j);
        if (!contains_point(m, v)) {
          rep.pass = false;
          rep.witness = v;
          break;
        }
      }
    }
  }
  return rep;
}

inline ContainmentReport contains_body(const Metronoid& m, const ConvexBody& body, const DirectionNet& net,
                                       const ContainOptions& opt = {}) {
  require(body.dim() == m.dim() && net.dim() == m.dim(), "contains_body: dimension mismatch");
  return contains_body_given(m, body, net, msupport_net(m, net), opt);
}

// ---------------------------------------------------------------- vertices

namespace detail {

inline bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

inline std::vector<Vector> dedupe_points(std::vector<Vector> pts, double tol) {
  std::sort(pts.begin(), pts.end(), lex_less);
  std::vector<Vector> out;
  for (auto& p : pts) {
    bool dup = false;
    for (std::size_t k = out.size(); k-- > 0;) {
      if (p(0) - out[k](0) > tol) break;
      if ((out[k] - p).cwiseAbs().maxCoeff() <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

/// Separating direction for p against conv(e): maximize <theta, p> - s with
/// <theta, e_j> <= s and |theta_i| <= 1. Returns theta when the margin
/// exceeds tol.
inline std::optional<Vector> separate(const std::vector<Vector>& e, const Vector& p, double tol) {
  const auto n = p.size();
  if (e.empty()) return Vector(Vector::Zero(n));
  LpProblem lp;
  lp.objective = Vector::Zero(n + 1);
  lp.objective.head(n) = p;
  lp.objective(n) = -1.0;
  lp.le_matrix = Matrix(static_cast<Eigen::Index>(e.size()), n + 1);
  for (std::size_t j = 0; j < e.size(); ++j) {
    lp.le_matrix.row(static_cast<Eigen::Index>(j)).head(n) = e[j].transpose();
    lp.le_matrix(static_cast<Eigen::Index>(j), n) = -1.0;
  }
  lp.le_rhs = Vector::Zero(static_cast<Eigen::Index>(e.size()));
  lp.lower = Vector::Constant(n + 1, -1.0);
  lp.upper = Vector::Constant(n + 1, 1.0);
  lp.lower(n) = -detail::kInf;
  lp.upper(n) = detail::kInf;
  auto r = lp_solve(lp);
  if (!r.optimal() || r.objective <= tol) return std::nullopt;
  return Vector(r.x.head(n));
}

/// Extreme points of conv(points) by Clarkson's output-sensitive scheme.
inline std::vector<Vector> extreme_points(const std::vector<Vector>& pts, double tol) {
  std::vector<Vector> ext;
  if (pts.empty()) return ext;
  const double scale = [&] {
    double s = 1.0;
    for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
    return s;
  }();
  std::vector<char> taken(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (taken[i]) continue;
    while (true) {
      auto theta = separate(ext, pts[i], tol * scale);
      if (!theta) break;
      // Lex-max maximizer of theta among all points is an extreme point.
      Vector th = *theta;
      if (th.cwiseAbs().maxCoeff() == 0.0) th = unit(pts[i].size(), 0);
      std::size_t best = 0;
      double best_v = -detail::kInf;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        double v = pts[j].dot(th);
        double band = 1e-12 * scale;
        if (v > best_v + band || (std::abs(v - best_v) <= band && lex_less(pts[best], pts[j]))) {
          if (v > best_v + band) best_v = v;
          best = j;
        }
      }
      if (taken[best]) break;  // numerical stall; the point cannot be separated further
      taken[best] = 1;
      ext.push_back(pts[best]);
      if (best == i) break;
    }
  }
  return ext;
}

inline std::vector<Vector> sort_ccw(std::vector<Vector> pts) {
  if (pts.size() < 2 || pts.front().size() != 2) return pts;
  Vector c = Vector::Zero(2);
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Vector& a, const Vector& b) {
    return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
  });
  return pts;
}

}  // namespace detail

inline constexpr std::size_t kBruteForceMaxAtoms = 22;

/// Images of the basic solutions of {0 <= l <= w, sum l = 1} (every
/// coordinate at a bound except at most one), filtered to extreme points.
inline std::vector<Vector> vertices_bruteforce(const Metronoid& m) {
  const std::size_t count = m.size();
  if (count > kBruteForceMaxAtoms) {
    throw DomainError("vertices: brute force supports at most 22 atoms, got " + std::to_string(count));
  }
  const Matrix& x = m.positions();
  const Vector& w = m.weights();
  const int n = m.dim();
  std::vector<Vector> cand;
  std::vector<char> in(count, 0);
  // DFS over sets S at their full weight with w(S) <= 1.
  std::function<void(std::size_t, double, const Vector&)> rec = [&](std::size_t start, double mass, const Vector& sum) {
    if (std::abs(mass - 1.0) <= tol::kMass) {
      cand.push_back(sum);
    } else if (mass < 1.0) {
      double rest = 1.0 - mass;
      for (std::size_t j = 0; j < count; ++j) {
        if (!in[j] && w(static_cast<Eigen::Index>(j)) >= rest - tol::kMass) {
          cand.push_back(sum + rest * x.col(static_cast<Eigen::Index>(j)));
        }
      }
    }
    for (std::size_t j = start; j < count; ++j) {
      double nm = mass + w(static_cast<Eigen::Index>(j));
      if (nm > 1.0 + tol::kMass) continue;
      in[j] = 1;
      rec(j + 1, nm, sum + w(static_cast<Eigen::Index>(j)) * x.col(static_cast<Eigen::Index>(j)));
      in[j] = 0;
    }
  };
  rec(0, 0.0, Vector::Zero(n));
  auto uniq = detail::dedupe_points(std::move(cand), 1e-10);
  auto ext = detail::extreme_points(uniq, 1e-10);
  ext = detail::dedupe_points(std::move(ext), 1e-9);
  return n == 2 ? detail::sort_ccw(std::move(ext)) : ext;
}

/// Planar angle sweep: the greedy order only changes where theta is
/// orthogonal to some x_i - x_j, so one extreme point per open angular cell
/// gives every vertex. Output in counter-clockwise order.
inline std::vector<Vector> vertices_sweep_2d(const Metronoid& m) {
  require(m.dim() == 2, "vertices_sweep_2d: measure must be planar");
  Metronoid merged(merge_atoms(m.measure()));
  const Matrix& x = merged.positions();
  const auto count = x.cols();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> events;
  for (Eigen::Index i = 0; i < count; ++i) {
    for (Eigen::Index j = i + 1; j < count; ++j) {
      Vector d = x.col(i) - x.col(j);
      if (d.cwiseAbs().maxCoeff() == 0.0) continue;
      double a = std::atan2(d(1), d(0)) + 0.5 * std::numbers::pi;
      for (double e : {a, a + std::numbers::pi}) {
        e = std::fmod(e, two_pi);
        if (e < 0.0) e += two_pi;
        events.push_back(e);
      }
    }
  }
  std::sort(events.begin(), events.end());
  std::vector<double> cuts;
  for (double e : events)
    if (cuts.empty() || e - cuts.back() > 1e-13) cuts.push_back(e);
  std::vector<double> mids;
  if (cuts.empty()) {
    mids.push_back(0.0);
  } else {
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      double a = cuts[k], b = k + 1 < cuts.size() ? cuts[k + 1] : cuts[0] + two_pi;
      mids.push_back(0.5 * (a + b));
    }
  }
  auto pts = parallel_map<Vector>(mids.size(), [&](std::size_t k) {
    return extreme_point(merged, make_vector({std::cos(mids[k]), std::sin(mids[k])}));
  });
  // Consecutive cells may share a vertex; the list is already cyclic.
  std::vector<Vector> out;
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : out) {
      if ((p - q).cwiseAbs().maxCoeff() <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  return detail::sort_ccw(std::move(out));
}

inline std::vector<Vector> vertices(const Metronoid& m) {
  if (m.dim() == 2) return vertices_sweep_2d(m);
  return vertices_bruteforce(m);
}

inline bool vertices_available(const Metronoid& m) { return m.dim() == 2 || m.size() <= kBruteForceMaxAtoms; }

// ----------------------------------------------------------------- sandwich

struct SandwichReport {
  ContainmentReport inner;  // K subset M
  bool outer_checked = false;
  bool outer_pass = true;  // M subset R K
  double outer_ratio = 0.0;  // max over net of h_M / h_K
  bool outer_exact = false;
  double outer_exact_gauge = 0.0;  // max gauge of vertices of M in K
  bool pass() const { return inner.pass && outer_pass; }
};

/// (1/R) M subset K subset M. R = +inf checks only the inner side.
inline SandwichReport sandwich_check(const Metronoid& m, const ConvexBody& body, double r, const DirectionNet& net,
                                     const ContainOptions& opt = {}) {
  require(r >= 1.0, "sandwich_check: R must be >= 1");
  SandwichReport rep;
  rep.inner = contains_body(m, body, net, opt);
  if (std::isinf(r)) return rep;
  rep.outer_checked = true;
  auto h = msupport_net(m, net);
  for (std::size_t k = 0; k < net.size(); ++k) rep.outer_ratio = std::max(rep.outer_ratio, h[k] / support(body, net[k]));
  rep.outer_pass = rep.outer_ratio <= r + opt.tol;
  if (body.origin_interior() && vertices_available(m) && m.size() <= 64) {
    rep.outer_exact = true;
    for (const auto& v : vertices(m)) rep.outer_exact_gauge = std::max(rep.outer_exact_gauge, gauge(body, v));
    rep.outer_pass = rep.outer_pass && rep.outer_exact_gauge <= r + opt.tol;
  }
  return rep;
}

}  // namespace metronoid
