#pragma once

// Fractional vertex index: certificates, the zonotope-cover search, and
// centroid bodies.

#include "metronoid/constructions.hpp"

#include <limits>
#include <optional>
#include <string>

namespace metronoid {

enum class CertificateKind { Exact, Sampled };

inline const char* to_string(CertificateKind k) { return k == CertificateKind::Exact ? "exact" : "sampled"; }

struct Certificate {
  DiscreteMeasure measure;
  ConvexBody body = ConvexBody::ball(1);
  double cost = 0.0;
  ContainmentReport verified;
  CertificateKind kind = CertificateKind::Exact;
  bool valid() const { return verified.pass; }
};

/// mu = sum_i (delta_{e_i} + delta_{-e_i}); M(mu) is the cross-polytope.
inline DiscreteMeasure cross_polytope_measure(int n) {
  require(n >= 1, "cross_polytope_measure: n must be >= 1");
  DiscreteMeasure mu(n);
  for (int i = 0; i < n; ++i) {
    mu.add(unit(n, i), 1.0);
    mu.add(-unit(n, i), 1.0);
  }
  return mu;
}

inline Certificate cross_polytope_certificate(int n) {
  Certificate c;
  c.measure = cross_polytope_measure(n);
  c.body = ConvexBody::cross_polytope(n);
  c.cost = transport_cost(c.measure, c.body);
  ContainOptions opt;
  opt.exact_max_vertices = static_cast<std::size_t>(2 * n);
  c.verified = contains_body(Metronoid(c.measure), c.body, DirectionNet::standard(n), opt);
  c.kind = CertificateKind::Exact;
  if (!c.verified.exact || !c.verified.pass) throw NumericalError("cross_polytope_certificate: containment failed to verify");
  return c;
}

/// 2 / mean_abs_inner(n), the cost of the sphere construction.
inline double ball_certificate_cost(int n) { return 2.0 / mean_abs_inner(n); }

/// Sphere construction checked against the ball of radius 1 - tol.
inline Certificate ball_certificate(int n, std::size_t count, std::uint64_t seed, double tol = 0.02,
                                    const DirectionNet* net = nullptr) {
  require(n >= 2, "ball_certificate: n must be >= 2");
  DirectionNet local = net ? *net : DirectionNet::standard(n, seed);
  auto rep = sphere_construction(n, count, seed, local, tol);
  Certificate c;
  c.measure = std::move(rep.measure);
  c.body = ConvexBody::ball(n);
  c.cost = rep.cost;
  c.verified = contains_body(Metronoid(c.measure), ConvexBody::ball(n, 1.0 - tol), local);
  c.kind = CertificateKind::Sampled;
  return c;
}

struct CrossFunctional {
  double total = 0.0;
  std::vector<double> one_sided;  // +e_1, -e_1, +e_2, ...
};

/// sum_i of the positive-part integrals in directions +-e_i; each is >= 1
/// whenever M(mu) contains the cross-polytope.
inline CrossFunctional cross_polytope_lower_functional(const DiscreteMeasure& mu) {
  CrossFunctional f;
  const int n = mu.dim();
  for (int i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      double v = positive_part_integral(mu, Vector(s * unit(n, i)));
      f.one_sided.push_back(v);
      f.total += v;
    }
  }
  return f;
}

/// Upper bound d * cost for a body at Banach-Mazur distance d.
inline double bm_transfer(double cost, double d) {
  require(d >= 1.0, "bm_transfer: distance must be >= 1");
  return d * cost;
}

// ----------------------------------------------------------- zonotope cover

struct CoverReport {
  double cost = 0.0;
  bool feasible = false;
  bool exact = false;
  double worst_slack = 0.0;  // min over net of h_Z - h_K
  double exact_ratio = 0.0;  // max over facet normals of h_K / h_Z
};

namespace detail {

inline Matrix generator_matrix(const std::vector<Vector>& gens, int n) {
  Matrix g(n, static_cast<Eigen::Index>(gens.size()));
  for (std::size_t j = 0; j < gens.size(); ++j) {
    require_dim(gens[j], n, "generator");
    g.col(static_cast<Eigen::Index>(j)) = gens[j];
  }
  return g;
}

inline double one_sided_support(const Matrix& g, const Vector& theta) {
  return (g.transpose() * theta).cwiseMax(0.0).sum();
}

/// Smallest s with K subset s Z(g), from the facet normals of Z. Infinite
/// when g does not span; nullopt when there are too many facets to list.
inline std::optional<double> exact_cover_ratio(const Matrix& g, const ConvexBody& body, double max_subsets = 2e5) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() == 0 || linear_rank(g) < n) return std::numeric_limits<double>::infinity();
  auto normals = zonotope_facet_normals(g, max_subsets);
  if (!normals) return std::nullopt;
  double ratio = 0.0;
  for (const auto& nu : *normals) {
    for (double s : {1.0, -1.0}) {
      Vector d = s * nu;
      double hz = one_sided_support(g, d);
      double hk = support(body, d);
      if (hz <= 0.0) return std::numeric_limits<double>::infinity();
      ratio = std::max(ratio, hk / hz);
    }
  }
  return ratio;
}

/// v = sum b_j g_j with 0 <= b_j <= 1.
inline bool in_one_sided_zonotope(const Matrix& g, const Vector& v) {
  LpProblem lp;
  lp.objective = Vector::Zero(g.cols());
  lp.eq_matrix = g;
  lp.eq_rhs = v;
  lp.lower = Vector::Zero(g.cols());
  lp.upper = Vector::Ones(g.cols());
  return lp_solve(lp).optimal();
}

}  // namespace detail

/// Cost sum ||y_i||_K of Z(y_1..y_m) and whether K subset Z.
inline CoverReport zonotope_cover_cost(const std::vector<Vector>& gens, const ConvexBody& body, const DirectionNet& net,
                                       double tol = tol::kBoundary) {
  if (!body.is_symmetric()) throw DomainError("zonotope_cover_cost: body must be symmetric");
  const int n = body.dim();
  CoverReport rep;
  Matrix g = detail::generator_matrix(gens, n);
  for (const auto& y : gens) rep.cost += gauge(body, y);
  rep.worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& th : net) {
    rep.worst_slack = std::min(rep.worst_slack, detail::one_sided_support(g, th) - support(body, th));
  }
  bool net_ok = rep.worst_slack >= -tol;
  auto ratio = detail::exact_cover_ratio(g, body);
  if (ratio) {
    rep.exact = true;
    rep.exact_ratio = *ratio;
    rep.feasible = *ratio <= 1.0 + tol;
  } else {
    rep.feasible = net_ok && linear_rank(g) == n;
  }
  if (body.kind() == BodyKind::VPolytope && gens.size() > 0) {
    // Second route: every vertex of K inside Z, by LP.
    bool all = true;
    for (Eigen::Index j = 0; j < body.points().cols() && all; ++j) all = detail::in_one_sided_zonotope(g, body.points().col(j));
    rep.exact = true;
    rep.feasible = all;
  }
  return rep;
}

struct SearchOptions {
  int iterations = 10000;
  int restarts = 8;
  std::uint64_t seed = 0;
  double tol = tol::kBoundary;
};

struct SearchResult {
  bool found = false;
  Certificate certificate;
  std::vector<Vector> generators;
  CoverReport cover;
  int best_restart = -1;
  std::vector<double> best_history;  // best-so-far cost of the winning restart
};

namespace detail {

struct CoverObjective {
  const ConvexBody& body;
  std::vector<Vector> net;  // facet-free fallback directions

  /// Scale s with K subset s Z(g) (exact when facets can be listed);
  /// `worst` receives the binding direction.
  double ratio(const Matrix& g, Vector* worst) const {
    const auto inf = std::numeric_limits<double>::infinity();
    if (linear_rank(g) < g.rows()) return inf;
    double best = 0.0;
    auto consider = [&](const Vector& d) {
      double hz = one_sided_support(g, d);
      double hk = support(body, d);
      double r = hz > 0.0 ? hk / hz : inf;
      if (r > best) {
        best = r;
        if (worst) *worst = d;
      }
    };
    auto normals = zonotope_facet_normals(g, 5000);
    if (normals) {
      for (const auto& nu : *normals) {
        consider(nu);
        consider(Vector(-nu));
      }
    } else {
      for (const auto& d : net) consider(d);
    }
    return best;
  }

  double cost(const Matrix& g) const {
    double c = 0.0;
    for (Eigen::Index j = 0; j < g.cols(); ++j) c += gauge(body, g.col(j));
    return c;
  }

  /// Subgradient of the gauge at y (a unit-support dual vector).
  Vector gauge_subgradient(const Vector& y) const {
    const Eigen::Index n = y.size();
    Vector s = Vector::Zero(n);
    if (y.cwiseAbs().maxCoeff() == 0.0) return s;
    const double r = body.radius();
    switch (body.kind()) {
      case BodyKind::Ball: return y / (y.norm() * r);
      case BodyKind::Cube: {
        Eigen::Index k;
        y.cwiseAbs().maxCoeff(&k);
        s(k) = (y(k) > 0.0 ? 1.0 : -1.0) / r;
        return s;
      }
      case BodyKind::CrossPolytope:
        for (Eigen::Index i = 0; i < n; ++i) s(i) = (y(i) > 0.0 ? 1.0 : (y(i) < 0.0 ? -1.0 : 0.0)) / r;
        return s;
      default: {
        // Finite differences on the LP gauge.
        const double base = gauge(body, y), h = 1e-7 * std::max(1.0, y.norm());
        for (Eigen::Index i = 0; i < n; ++i) {
          Vector yp = y;
          yp(i) += h;
          s(i) = (gauge(body, yp) - base) / h;
        }
        return s;
      }
    }
  }
};

}  // namespace detail

/// Penalized subgradient search for a cheap zonotope Z(y_1..y_m) containing
/// K, with every iterate scaled back onto the feasible boundary. Restarts
/// are independent and reduced by (cost, restart index).
inline SearchResult fvein_search(const ConvexBody& body, int m, const SearchOptions& opt = {}) {
  const int n = body.dim();
  if (!body.is_symmetric()) throw DomainError("fvein_search: body must be symmetric");
  require(n <= 6, "fvein_search: dimension must be <= 6");
  require(m >= n && m <= 8 * n, "fvein_search: need n <= m <= 8n generators");
  require(opt.iterations >= 1 && opt.restarts >= 1, "fvein_search: iterations and restarts must be positive");
  const DirectionNet net = DirectionNet::standard(n, opt.seed);
  detail::CoverObjective obj{body, net.directions()};

  struct Run {
    bool found = false;
    Matrix best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> history;
  };

  auto run_one = [&](std::size_t r) {
    Run run;
    CounterRng rng(opt.seed, "fvein-search", r);
    Matrix y(n, m);
    for (int j = 0; j < m; ++j) {
      Vector e = unit(n, (j / 2) % n) * (j % 2 == 0 ? 1.0 : -1.0);
      Vector g(n);
      for (int i = 0; i < n; ++i) g(i) = rng.normal();
      double noise = (r == 0) ? (m > 2 * n ? 1e-3 : 0.0) : (r % 2 == 1 ? 0.3 : 0.0);
      y.col(j) = (r == 0 || r % 2 == 1) ? Vector(e + noise * g) : Vector(g / g.norm());
    }
    double penalty = 10.0 * n;
    int stall = 0;
    auto project = [&](Matrix& g) {
      double s = obj.ratio(g, nullptr);
      if (!std::isfinite(s) || !(s > 0.0)) return false;
      g *= s * (1.0 + 1e-12);
      return true;
    };
    if (project(y)) {
      run.found = true;
      run.best = y;
      run.best_cost = obj.cost(y);
    }
    for (int k = 1; k <= opt.iterations; ++k) {
      Vector worst = Vector::Zero(n);
      double ratio = obj.ratio(y, &worst);
      if (!std::isfinite(ratio)) {
        // Degenerate iterate: restart from the best point with a kick.
        y = run.found ? run.best : Matrix(Matrix::Random(n, m));
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < n; ++i) y(i, j) += 0.05 * rng.normal();
        project(y);
        continue;
      }
      double scale = y.colwise().norm().mean();
      double step = 0.1 / std::sqrt(static_cast<double>(k)) * scale;
      Matrix grad(n, m);
      double hk = support(body, worst);
      for (int j = 0; j < m; ++j) {
        Vector gj = obj.gauge_subgradient(y.col(j));
        if (y.col(j).dot(worst) > 0.0 && ratio >= 1.0 - 1e-9) gj -= (penalty / (n * std::max(hk, 1e-12))) * worst;
        grad.col(j) = gj;
      }
      Matrix cand = y - step * grad;
      // Local move: jitter one generator.
      if (k % 2 == 0) {
        auto j = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(m));
        for (int i = 0; i < n; ++i) cand(i, j) += 0.05 * step * rng.normal();
      }
      if (project(cand)) {
        y = cand;
        double c = obj.cost(y);
        if (c < run.best_cost - 1e-15) {
          run.best_cost = c;
          run.best = y;
          run.found = true;
          stall = 0;
        } else if (++stall >= 50) {
          penalty *= 2.0;
          stall = 0;
          if (penalty > 1e4 * n) penalty = 10.0 * n;
        }
      }
      run.history.push_back(run.best_cost);
    }
    return run;
  };

  auto runs = parallel_map<Run>(static_cast<std::size_t>(opt.restarts), run_one);
  SearchResult res;
  std::size_t pick = runs.size();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (!runs[r].found) continue;
    if (pick == runs.size() || runs[r].best_cost < runs[pick].best_cost) pick = r;
  }
  if (pick == runs.size()) return res;
  res.best_restart = static_cast<int>(pick);
  res.best_history = runs[pick].history;
  for (Eigen::Index j = 0; j < runs[pick].best.cols(); ++j) res.generators.emplace_back(runs[pick].best.col(j));
  res.cover = zonotope_cover_cost(res.generators, body, net, opt.tol);
  // Z(y_1..y_m) = M(delta_0 + sum (1/m) delta_{m y_i}) with the same cost.
  Certificate& c = res.certificate;
  c.measure = DiscreteMeasure(n);
  c.measure.add(Vector::Zero(n), 1.0);
  for (const auto& y : res.generators) c.measure.add(static_cast<double>(m) * y, 1.0 / m);
  c.body = body;
  c.cost = transport_cost(c.measure, body);
  c.verified = contains_body(Metronoid(c.measure), body, net, ContainOptions{opt.tol});
  c.kind = res.cover.exact ? CertificateKind::Exact : CertificateKind::Sampled;
  res.found = res.cover.feasible && c.verified.pass;
  return res;
}

// ----------------------------------------------------------- centroid body

/// Z_1(mu) = sum [-w_i x_i, w_i x_i] for a probability measure whose atoms
/// affinely span R^n. Parallel generators from +-x are combined.
inline ConvexBody centroid_body(const DiscreteMeasure& mu) {
  const double mass = total_mass(mu);
  if (std::abs(mass - 1.0) > 1e-9) throw DomainError("centroid_body: measure must be a probability measure");
  if (affine_rank(mu.positions()) < mu.dim()) {
    throw DomainError("centroid_body: atoms do not affinely span R^n; the centroid body is degenerate and its gauge undefined");
  }
  DiscreteMeasure canon(mu.dim());
  for (const auto& a : mu)
    if (a.x.cwiseAbs().maxCoeff() > tol::kMerge) canon.add(detail::canonical_sign(a.x, tol::kMerge), a.w);
  DiscreteMeasure merged = merge_atoms(canon);
  Matrix g(mu.dim(), static_cast<Eigen::Index>(merged.size()));
  for (std::size_t j = 0; j < merged.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = merged[j].w * merged[j].x;
  return ConvexBody::from_matrix(BodyKind::ZonotopeSymmetric, std::move(g));
}

/// sum w |<x, theta>| straight from the measure.
inline double centroid_support(const DiscreteMeasure& mu, const Vector& theta) {
  double s = 0.0;
  for (const auto& a : mu) s += a.w * std::abs(a.x.dot(theta));
  return s;
}

inline double centroid_energy(const DiscreteMeasure& mu) {
  ConvexBody z = centroid_body(mu);
  auto parts = parallel_map<double>(mu.size(), [&](std::size_t i) { return mu[i].w * gauge(z, mu[i].x); });
  return compensated_sum(parts);
}

struct PipelineReport {
  DiscreteMeasure nu;
  bool contains = false;     // K subset M(nu + delta_0) on the net
  double cost_in = 0.0;
  double cost_out = 0.0;
  bool cost_preserved = false;
  double bridge_gap = 0.0;  // max |h_{M(nu + delta_0)} - h_{Z_1(nu)} / 2|
  bool bridge_holds = false;
};

/// Normalize to a probability measure, symmetrize, and check the three
/// consequences: containment, cost, and M(nu + delta_0) = Z_1(nu) / 2.
inline PipelineReport equivalence_pipeline(const DiscreteMeasure& mu, const ConvexBody& body, const DirectionNet& net) {
  if (!body.is_symmetric()) throw DomainError("equivalence_pipeline: body must be symmetric");
  if (!contains_body(Metronoid(mu), body, net).pass) throw DomainError("equivalence_pipeline: K is not contained in M(mu)");
  PipelineReport rep;
  rep.nu = symmetrize(normalize_probability(mu));
  DiscreteMeasure with_origin = rep.nu;
  with_origin.add(Vector::Zero(mu.dim()), 1.0);
  Metronoid m(with_origin);
  rep.contains = contains_body(m, body, net).pass;
  rep.cost_in = transport_cost(mu, body);
  rep.cost_out = transport_cost(rep.nu, body);
  rep.cost_preserved = std::abs(rep.cost_out - rep.cost_in) <= 1e-9 * std::max(1.0, rep.cost_in);
  auto h = msupport_net(m, net);
  for (std::size_t k = 0; k < net.size(); ++k) {
    rep.bridge_gap = std::max(rep.bridge_gap, std::abs(h[k] - 0.5 * centroid_support(rep.nu, net[k])));
  }
  rep.bridge_holds = rep.bridge_gap <= 1e-10;
  return rep;
}

/// Measure restricted to the coordinates in `coords`.
inline DiscreteMeasure project_coordinates(const DiscreteMeasure& mu, const std::vector<int>& coords) {
  require(!coords.empty(), "project_coordinates: need at least one coordinate");
  DiscreteMeasure out(static_cast<int>(coords.size()));
  for (const auto& a : mu) {
    Vector x(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      require(coords[i] >= 0 && coords[i] < mu.dim(), "project_coordinates: coordinate out of range");
      x(static_cast<Eigen::Index>(i)) = a.x(coords[i]);
    }
    out.add(std::move(x), a.w);
  }
  return out;
}

/// Coordinate projection of an analytic body (ball, cube, cross-polytope
/// keep their type).
inline ConvexBody project_body(const ConvexBody& body, int k) {
  require(body.is_analytic(), "project_body: only analytic bodies are supported");
  require(k >= 1 && k <= body.dim(), "project_body: bad target dimension");
  switch (body.kind()) {
    case BodyKind::Ball: return ConvexBody::ball(k, body.radius());
    case BodyKind::Cube: return ConvexBody::cube(k, body.radius());
    default: return ConvexBody::cross_polytope(k, body.radius());
  }
}

}  // namespace metronoid
