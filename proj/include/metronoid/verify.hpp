#pragma once

// Property suites run by `metronoid verify`. Every case draws from its own
// (seed, property, case) stream, and reductions run in case order, so the
// report does not depend on the worker count.

#include "metronoid/constructions.hpp"
#include "metronoid/io.hpp"
#include "metronoid/vertex_index.hpp"

#include <functional>
#include <string>
#include <vector>

namespace metronoid {

struct PropertyResult {
  std::string name;
  int cases = 0;
  double worst = 0.0;  // worst observed slack or error, in the property's own units
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyReport {
  bool pass = true;
  io::Json json = io::Json::array();
};

namespace verify {

inline Vector normal_vector(CounterRng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

inline Vector unit_vector(CounterRng& rng, int n) {
  Vector v = normal_vector(rng, n);
  while (v.norm() < 1e-6) v = normal_vector(rng, n);
  return v / v.norm();
}

inline int uniform_int(CounterRng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

inline double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

/// Atoms N(0, I), weights in [wlo, whi], redrawn until the mass is >= 1.
inline DiscreteMeasure random_measure(CounterRng& rng, int n, int atoms, double wlo = 0.1, double whi = 2.0) {
  while (true) {
    DiscreteMeasure mu(n);
    for (int i = 0; i < atoms; ++i) mu.add(normal_vector(rng, n), uniform(rng, wlo, whi));
    if (total_mass(mu) >= 1.0) return mu;
  }
}

/// Unit atom at the origin plus off-origin atoms of total mass <= 1.
inline DiscreteMeasure origin_heavy_measure(CounterRng& rng, int n, int atoms, bool symmetric) {
  DiscreteMeasure mu(n);
  mu.add(Vector::Zero(n), 1.0 + (symmetric ? 0.0 : uniform(rng, 0.0, 0.5)));
  std::vector<Vector> xs;
  std::vector<double> ws;
  double sum = 0.0;
  for (int i = 0; i < atoms; ++i) {
    xs.push_back(normal_vector(rng, n));
    ws.push_back(uniform(rng, 0.1, 1.0));
    sum += ws.back();
  }
  const double target = uniform(rng, 0.2, 1.0) / (symmetric ? 2.0 : 1.0);
  for (int i = 0; i < atoms; ++i) {
    double w = ws[static_cast<std::size_t>(i)] * target / sum;
    mu.add(xs[static_cast<std::size_t>(i)], w);
    if (symmetric) mu.add(-xs[static_cast<std::size_t>(i)], w);
  }
  return mu;
}

/// Runs `one(case)` for every case and keeps the largest error.
inline PropertyResult max_error(const std::string& name, int cases, double tol,
                                const std::function<double(std::size_t)>& one) {
  auto errs = parallel_map<double>(static_cast<std::size_t>(cases), one);
  PropertyResult r{name, cases, 0.0, tol, true};
  for (double e : errs) {
    if (!(e <= r.worst)) r.worst = e;  // NaN sticks
  }
  r.pass = r.worst <= tol;
  return r;
}

// ------------------------------------------------------------------ geometry

inline std::vector<PropertyResult> geometry(std::uint64_t seed, int cases) {
  std::vector<PropertyResult> out;
  out.push_back(max_error("support_symmetry", cases, 0.0, [&](std::size_t c) {
    CounterRng rng(seed, "verify:support", c);
    const int n = uniform_int(rng, 2, 4);
    std::vector<Vector> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(normal_vector(rng, n));
    std::vector<ConvexBody> bodies{ConvexBody::ball(n, 1.5), ConvexBody::cube(n, 0.5), ConvexBody::cross_polytope(n),
                                   ConvexBody::vpolytope(pts), ConvexBody::zonotope_one_sided(pts),
                                   ConvexBody::zonotope_symmetric(pts)};
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
      Vector th = unit_vector(rng, n);
      for (const auto& b : bodies) {
        double a = support(b, th), z = support(b, Vector(-th));
        worst = std::max(worst, -(a + z));
        if (b.kind() != BodyKind::VPolytope && b.kind() != BodyKind::ZonotopeOneSided) {
          worst = std::max(worst, std::abs(a - z));
        }
      }
    }
    return worst;
  }));
  out.push_back(max_error("gauge_duality", cases, 1e-6, [&](std::size_t c) {
    // Boundary point x/t must be supported by some direction of a 1000-net
    // augmented with the facet normals.
    CounterRng rng(seed, "verify:duality", c);
    const int n = uniform_int(rng, 2, 3);
    std::vector<Vector> pts;
    for (int i = 0; i < 10; ++i) pts.push_back(unit_vector(rng, n) * uniform(rng, 0.8, 1.6));
    for (int i = 0; i < n; ++i) {
      pts.push_back(unit(n, i));
      pts.push_back(-unit(n, i));
    }
    ConvexBody k = ConvexBody::vpolytope(pts);
    auto h = halfspaces(k);
    std::vector<Vector> dirs = DirectionNet::standard(n, c, 1000).directions();
    for (Eigen::Index i = 0; h && i < h->a.rows(); ++i) dirs.emplace_back(h->a.row(i).transpose());
    double worst = 0.0;
    for (int q = 0; q < 5; ++q) {
      Vector x = normal_vector(rng, n);
      Vector p = x / gauge(k, x);
      double best = -std::numeric_limits<double>::infinity();
      for (const auto& th : dirs) best = std::max(best, p.dot(th) / support(k, th));
      worst = std::max(worst, 1.0 - best);
    }
    return worst;
  }));
  out.push_back(max_error("lp_vs_enumeration", cases, 1e-9, [&](std::size_t c) {
    CounterRng rng(seed, "verify:lp", c);
    const int nv = uniform_int(rng, 1, 3), ne = uniform_int(rng, 0, std::min(nv, 3) - (nv == 3 ? 1 : 0));
    LpProblem lp;
    lp.objective = normal_vector(rng, nv);
    lp.eq_matrix = Matrix(ne, nv);
    for (int i = 0; i < ne; ++i) lp.eq_matrix.row(i) = normal_vector(rng, nv).transpose();
    lp.lower = Vector(nv);
    lp.upper = Vector(nv);
    Vector inside(nv);
    for (int j = 0; j < nv; ++j) {
      lp.lower(j) = uniform(rng, -1.0, 0.0);
      lp.upper(j) = uniform(rng, 0.1, 1.5);
      inside(j) = uniform(rng, lp.lower(j), lp.upper(j));
    }
    // Half of the instances are feasible by construction.
    lp.eq_rhs = c % 2 == 0 ? Vector(lp.eq_matrix * inside) : normal_vector(rng, ne);
    auto res = lp_solve(lp);
    // Vertices: ne free variables solved from the equalities, the rest at
    // a bound.
    double best = -std::numeric_limits<double>::infinity();
    for (int mask = 0; mask < (1 << nv); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != ne) continue;
      std::vector<int> freev, fixedv;
      for (int j = 0; j < nv; ++j) ((mask >> j) & 1 ? freev : fixedv).push_back(j);
      for (int bits = 0; bits < (1 << fixedv.size()); ++bits) {
        Vector x(nv);
        for (std::size_t f = 0; f < fixedv.size(); ++f) {
          int j = fixedv[f];
          x(j) = (bits >> f) & 1 ? lp.upper(j) : lp.lower(j);
        }
        if (ne > 0) {
          Matrix a(ne, ne);
          Vector rhs = lp.eq_rhs;
          for (int i = 0; i < ne; ++i) {
            for (std::size_t f = 0; f < freev.size(); ++f) a(i, static_cast<Eigen::Index>(f)) = lp.eq_matrix(i, freev[f]);
            for (int j : fixedv) rhs(i) -= lp.eq_matrix(i, j) * x(j);
          }
          Eigen::FullPivLU<Matrix> lu(a);
          if (!lu.isInvertible()) continue;
          Vector s = lu.solve(rhs);
          for (std::size_t f = 0; f < freev.size(); ++f) x(freev[f]) = s(static_cast<Eigen::Index>(f));
        }
        bool ok = true;
        for (int j = 0; j < nv; ++j) ok = ok && x(j) >= lp.lower(j) - 1e-9 && x(j) <= lp.upper(j) + 1e-9;
        if (ok) best = std::max(best, lp.objective.dot(x));
      }
    }
    const bool feasible = std::isfinite(best);
    if (feasible != res.optimal()) return 1.0;
    return feasible ? std::abs(best - res.objective) : 0.0;
  }));
  out.push_back(max_error("gauge_closed_form", cases, 1e-8, [&](std::size_t c) {
    CounterRng rng(seed, "verify:gauge", c);
    const int n = uniform_int(rng, 2, 4);
    std::vector<Vector> cross, cube, axes;
    for (int i = 0; i < n; ++i) {
      cross.push_back(unit(n, i));
      cross.push_back(-unit(n, i));
      axes.push_back(unit(n, i));
    }
    for (int mask = 0; mask < (1 << n); ++mask) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
      cube.push_back(v);
    }
    ConvexBody b1 = ConvexBody::vpolytope(cross), binf = ConvexBody::vpolytope(cube);
    ConvexBody zinf = ConvexBody::zonotope_symmetric(axes);
    double worst = 0.0;
    for (int q = 0; q < 10; ++q) {
      Vector x = normal_vector(rng, n);
      worst = std::max(worst, std::abs(gauge(b1, x) - x.lpNorm<1>()));
      worst = std::max(worst, std::abs(gauge(binf, x) - x.lpNorm<Eigen::Infinity>()));
      worst = std::max(worst, std::abs(gauge(zinf, x) - x.lpNorm<Eigen::Infinity>()));
      if (n == 2) {
        // B_1^2 is also the symmetric zonotope of (e1 +- e2)/2.
        ConvexBody z1 = ConvexBody::zonotope_symmetric({make_vector({0.5, 0.5}), make_vector({0.5, -0.5})});
        worst = std::max(worst, std::abs(gauge(z1, x) - x.lpNorm<1>()));
      }
    }
    return worst;
  }));
  out.push_back(max_error("zonotope_gauge_routes", std::max(1, cases / 5), 1e-9, [&](std::size_t c) {
    // Facet walk against the primal LP on zonotopes beyond the LP cutoff.
    CounterRng rng(seed, "verify:walk", c);
    const int n = uniform_int(rng, 2, 4);
    std::vector<Vector> gens;
    for (int i = 0; i < 64; ++i) gens.push_back(normal_vector(rng, n) * uniform(rng, 0.01, 2.0));
    ConvexBody z = ConvexBody::zonotope_symmetric(gens);
    double worst = 0.0;
    for (int q = 0; q < 5; ++q) {
      Vector x = normal_vector(rng, n);
      double lp = metronoid::gauge_zonotope_lp(z, x);
      auto walk = gauge_zonotope_walk(z, x);
      worst = std::max(worst, walk ? std::abs(*walk - lp) / lp : 1.0);
    }
    return worst;
  }));
  return out;
}

// ------------------------------------------------------------------ measures

inline double measure_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, (a[i].x - b[i].x).cwiseAbs().maxCoeff());
    d = std::max(d, std::abs(a[i].w - b[i].w));
  }
  return d;
}

inline std::vector<PropertyResult> measures(std::uint64_t seed, int cases) {
  std::vector<PropertyResult> out;
  out.push_back(max_error("symmetrize_invariance", cases, 1e-12, [&](std::size_t c) {
    CounterRng rng(seed, "verify:sym", c);
    const int n = uniform_int(rng, 1, 4);
    DiscreteMeasure mu = random_measure(rng, n, uniform_int(rng, 1, 10));
    DiscreteMeasure nu = symmetrize(mu);
    ConvexBody k = ConvexBody::cross_polytope(n);
    double cost = transport_cost(mu, k);
    double e = std::abs(total_mass(nu) - total_mass(mu)) / total_mass(mu);
    e = std::max(e, std::abs(transport_cost(nu, k) - cost) / cost);
    // Exact pairing: atom (−x, w) for every (x, w).
    for (const auto& a : nu) {
      bool found = false;
      for (const auto& b : nu) found = found || ((b.x + a.x).cwiseAbs().maxCoeff() == 0.0 && b.w == a.w);
      if (!found) return 1.0;
    }
    return e;
  }));
  out.push_back(max_error("radial_rescale_cost", cases, 1e-12, [&](std::size_t c) {
    CounterRng rng(seed, "verify:rescale", c);
    const int n = uniform_int(rng, 1, 4);
    DiscreteMeasure mu = random_measure(rng, n, uniform_int(rng, 1, 10));
    std::vector<double> r;
    double mass = 1.0;
    for (const auto& a : mu) {
      r.push_back(uniform(rng, 1.0, 4.0));
      mass += a.w / r.back();
    }
    DiscreteMeasure nu = radial_rescale(mu, r);
    ConvexBody k = ConvexBody::ball(n);
    const double cost = transport_cost(mu, k);
    return std::max(std::abs(transport_cost(nu, k) - cost) / cost, std::abs(total_mass(nu) - mass) / mass);
  }));
  out.push_back(max_error("pushforward_roundtrip", cases, 1e-10, [&](std::size_t c) {
    CounterRng rng(seed, "verify:push", c);
    const int n = uniform_int(rng, 1, 4);
    DiscreteMeasure mu = random_measure(rng, n, uniform_int(rng, 1, 10));
    Matrix t(n, n);
    do {
      for (int i = 0; i < n; ++i) t.row(i) = normal_vector(rng, n).transpose();
      t += Matrix::Identity(n, n);
    } while (std::abs(t.determinant()) < 1e-2);
    DiscreteMeasure back = pushforward(Matrix(t.inverse()), pushforward(t, mu));
    return measure_distance(mu, back);
  }));
  out.push_back(max_error("discretize_mass", cases, 1e-12, [&](std::size_t c) {
    CounterRng rng(seed, "verify:grid", c);
    const int n = uniform_int(rng, 1, 3);
    DiscreteMeasure mu = random_measure(rng, n, uniform_int(rng, 1, 20));
    GridSpec g;
    g.range = 2.0;
    g.eps = uniform(rng, 0.01, 0.24);
    g.resolution = required_resolution(n, total_mass(mu), g.eps);
    auto d = discretize_grid_full(mu, g);
    const double m = total_mass(mu);
    return std::max(std::abs(total_mass(d.snapped) - m), std::abs(total_mass(d.measure) - m)) / m;
  }));
  out.push_back(max_error("sampler_reproducible", std::max(1, cases / 10), 0.0, [&](std::size_t c) {
    std::uint64_t s = splitmix64(seed + c);
    double d = measure_distance(sample_sphere(3, 1.0, 2.0, 500, s), sample_sphere(3, 1.0, 2.0, 500, s));
    d = std::max(d, measure_distance(sample_body_uniform(ConvexBody::cube(2), 2.0, 500, s),
                                     sample_body_uniform(ConvexBody::cube(2), 2.0, 500, s)));
    return d;
  }));
  return out;
}

// ----------------------------------------------------------------- metronoid

inline std::vector<PropertyResult> engine(std::uint64_t seed, int cases) {
  std::vector<PropertyResult> out;
  out.push_back(max_error("greedy_lp_agreement", cases, 1e-9, [&](std::size_t c) {
    CounterRng rng(seed, "verify:greedy", c);
    const int n = uniform_int(rng, 1, 5);
    Metronoid m(random_measure(rng, n, uniform_int(rng, 1, 12)));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      Vector th = unit_vector(rng, n);
      worst = std::max(worst, std::abs(msupport(m, th) - msupport_lp(m, th)));
    }
    return worst;
  }));
  out.push_back(max_error("positive_part_dominates", cases, 1e-12, [&](std::size_t c) {
    CounterRng rng(seed, "verify:pp", c);
    const int n = uniform_int(rng, 1, 5);
    Metronoid m(random_measure(rng, n, uniform_int(rng, 1, 12)));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      Vector th = unit_vector(rng, n);
      worst = std::max(worst, msupport(m, th) - positive_part_integral(m, th));
    }
    return worst;
  }));
  out.push_back(max_error("hull_zonotope_sandwich", cases, 1e-9, [&](std::size_t c) {
    CounterRng rng(seed, "verify:hz", c);
    const int n = uniform_int(rng, 1, 5);
    Metronoid m(random_measure(rng, n, uniform_int(rng, 1, 12)));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      auto b = hull_zonotope_bounds(m, unit_vector(rng, n));
      worst = std::max(worst, b.h_metronoid - std::min(b.h_hull, b.h_zonotope));
    }
    return worst;
  }));
  out.push_back(max_error("symmetric_zonoid_identity", cases, 1e-10, [&](std::size_t c) {
    CounterRng rng(seed, "verify:zonoid", c);
    const int n = uniform_int(rng, 1, 4);
    Metronoid m(origin_heavy_measure(rng, n, uniform_int(rng, 1, 5), true));
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      Vector th = unit_vector(rng, n);
      worst = std::max(worst, std::abs(zonoid_support_symmetric(m, th) - msupport(m, th)));
    }
    return worst;
  }));
  out.push_back(max_error("zonotope_equality_condition", std::max(1, cases / 5), 1e-9, [&](std::size_t c) {
    CounterRng rng(seed, "verify:z26", c);
    const int n = uniform_int(rng, 2, 3);
    Metronoid m(origin_heavy_measure(rng, n, uniform_int(rng, 1, 6), false));
    auto rep = zonotope_equality_check(m);
    return rep.condition_met ? rep.worst_gap : 1.0;
  }));
  out.push_back(max_error("linear_invariance", cases, 1e-8, [&](std::size_t c) {
    CounterRng rng(seed, "verify:linear", c);
    const int n = uniform_int(rng, 1, 4);
    DiscreteMeasure mu = random_measure(rng, n, uniform_int(rng, 1, 12));
    Matrix t(n, n);
    do {
      for (int i = 0; i < n; ++i) t.row(i) = normal_vector(rng, n).transpose();
    } while (std::abs(t.determinant()) < 1e-2);
    Metronoid a(mu), b(pushforward(t, mu));
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
      Vector th = unit_vector(rng, n);
      Vector tt = t.transpose() * th;
      worst = std::max(worst, std::abs(msupport(b, th) - msupport(a, tt)) / (1.0 + tt.norm()));
    }
    return worst;
  }));
  out.push_back(max_error("rescale_monotone", cases, 1e-9, [&](std::size_t c) {
    CounterRng rng(seed, "verify:mono", c);
    const int n = uniform_int(rng, 2, 3);
    const bool light = c % 2 == 1;  // off-origin mass <= 1 <= origin weight: equality
    DiscreteMeasure mu = light ? origin_heavy_measure(rng, n, uniform_int(rng, 1, 6), false)
                               : random_measure(rng, n, uniform_int(rng, 1, 10));
    std::vector<double> r;
    for (const auto& a : mu)
      if (!is_origin(a.x)) r.push_back(uniform(rng, 1.0, 3.0));
    Metronoid a(mu), b(radial_rescale(mu, r));
    DirectionNet net = DirectionNet::standard(n, c, 256);
    auto ha = msupport_net(a, net), hb = msupport_net(b, net);
    double worst = 0.0;
    for (std::size_t k = 0; k < net.size(); ++k) {
      worst = std::max(worst, ha[k] - hb[k]);
      if (light) worst = std::max(worst, std::abs(ha[k] - hb[k]));
    }
    return worst;
  }));
  out.push_back(max_error("membership_maximality", cases, 1e-9, [&](std::size_t c) {
    CounterRng rng(seed, "verify:member", c);
    const int n = uniform_int(rng, 1, 4);
    Metronoid m(random_measure(rng, n, uniform_int(rng, 2, 10)));
    Vector y = 0.5 * (extreme_point(m, unit_vector(rng, n)) + extreme_point(m, unit_vector(rng, n)));
    auto r = detail::membership_lp(m, y);
    if (!r.optimal()) return 1.0;
    Vector z = m.positions() * r.x;
    double worst = (z - y).cwiseAbs().maxCoeff() - 1e-9;
    for (int k = 0; k < 50; ++k) {
      Vector th = unit_vector(rng, n);
      worst = std::max(worst, z.dot(th) - msupport(m, th));
    }
    return worst;
  }));
  out.push_back(max_error("vertices_sweep_vs_bruteforce", std::max(1, cases / 4), 0.0, [&](std::size_t c) {
    CounterRng rng(seed, "verify:verts", c);
    Metronoid m(random_measure(rng, 2, uniform_int(rng, 1, 12)));
    auto a = vertices_sweep_2d(m), b = vertices_bruteforce(m);
    double bad = a.size() == b.size() ? 0.0 : 1.0;
    for (const auto& p : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : b) best = std::min(best, (p - q).cwiseAbs().maxCoeff());
      if (best > 1e-9) bad = 1.0;
      if (a.size() > 1 && membership(m, p).status != MemberStatus::Boundary) bad = 1.0;
    }
    return bad;
  }));
  return out;
}

// ------------------------------------------------------------- constructions

inline std::vector<PropertyResult> constructions(std::uint64_t seed, int cases) {
  std::vector<PropertyResult> out;
  out.push_back(max_error("mean_abs_inner_recurrence", 1, 1e-12, [&](std::size_t) {
    double worst = std::max(std::abs(mean_abs_inner(2) - 2.0 / std::numbers::pi), std::abs(mean_abs_inner(3) - 0.5));
    for (int n = 1; n <= 200; ++n) {
      double lhs = mean_abs_inner(n + 2), rhs = mean_abs_inner(n) * n / (n + 1.0);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    return worst;
  }));
  out.push_back(max_error("sphere_mass_cost", std::max(1, cases / 10), 1e-12, [&](std::size_t c) {
    const int n = 2 + static_cast<int>(c % 4);
    auto rep = sphere_construction(n, 200, splitmix64(seed ^ c), DirectionNet::standard(n, seed, 64));
    return std::max(std::abs(rep.mass - 2.0) / 2.0, std::abs(rep.cost - 2.0 * rep.scale) / (2.0 * rep.scale));
  }));
  out.push_back(max_error("tail_infinity_is_grunbaum", std::max(1, cases / 25), 0.0, [&](std::size_t c) {
    ConvexBody k = c % 2 ? centered_simplex(2) : ConvexBody::ball(3);
    Vector u = unit(k.dim(), 0);
    auto a = tail_volume_ratio(k, u, std::numeric_limits<double>::infinity(), 20000, seed + c);
    auto b = grunbaum_ratio(k, u, 20000, seed + c);
    return std::abs(a.value - b.value) + std::abs(a.std_error - b.std_error);
  }));
  out.push_back(max_error("tail_convexity", 1, 0.0, [&](std::size_t) {
    double bad = 0.0;
    auto line = [](double t) { return (3.0 - t) / 2.0; };
    auto elliptic = [](double t) { return 2.0 * std::sqrt(std::max(0.0, 1.0 - (t / 3.0) * (t / 3.0))); };
    for (int p : {1, 2, 3}) {
      if (!tail_convexity_check(line, 3.0, p).holds) bad = 1.0;
      if (!tail_convexity_check(elliptic, 3.0, p).holds) bad = 1.0;
      if (!tail_convexity_check([](double) { return 1.0; }, 2.0, p).holds) bad = 1.0;
    }
    return bad;
  }));
  return out;
}

// -------------------------------------------------------------- vertex index

inline std::vector<PropertyResult> vertex_index(std::uint64_t seed, int cases) {
  std::vector<PropertyResult> out;
  out.push_back(max_error("cross_certificate_cost", 8, 0.0, [&](std::size_t c) {
    const int n = static_cast<int>(c) + 1;
    auto cert = cross_polytope_certificate(n);
    return std::abs(cert.cost - 2.0 * n) + (cert.valid() && cert.verified.exact ? 0.0 : 1.0);
  }));
  out.push_back(max_error("cross_lower_bound", std::max(1, cases / 2), 0.0, [&](std::size_t c) {
    // Outward-scaled cross measure plus random extra atoms still contains
    // B_1^n; its cost must not drop below 2n.
    CounterRng rng(seed, "verify:cross", c);
    const int n = uniform_int(rng, 1, 5);
    DiscreteMeasure mu(n);
    for (int i = 0; i < n; ++i) {
      mu.add(uniform(rng, 1.0, 2.0) * unit(n, i), 1.0);
      mu.add(-uniform(rng, 1.0, 2.0) * unit(n, i), 1.0);
    }
    for (int k = uniform_int(rng, 0, 4); k > 0; --k) mu.add(normal_vector(rng, n), uniform(rng, 0.1, 1.0));
    ConvexBody b1 = ConvexBody::cross_polytope(n);
    auto rep = contains_body(Metronoid(mu), b1, DirectionNet::standard(n, c, 64));
    if (!rep.pass) return 0.0;  // vacuous
    return positive_part(2.0 * n - 2.0 * n * 1e-6 - transport_cost(mu, b1));
  }));
  out.push_back(max_error("centroid_support_even", cases, 0.0, [&](std::size_t c) {
    CounterRng rng(seed, "verify:even", c);
    const int n = uniform_int(rng, 1, 4);
    DiscreteMeasure mu = normalize_probability(random_measure(rng, n, uniform_int(rng, n + 1, 10)));
    ConvexBody z = centroid_body(mu);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
      Vector th = normal_vector(rng, n);
      worst = std::max(worst, std::abs(support(z, th) - support(z, Vector(-th))));
      worst = std::max(worst, std::abs(support(z, Vector(2.0 * th)) - 2.0 * support(z, th)));
    }
    return worst;
  }));
  out.push_back(max_error("pipeline_bridge", std::max(1, cases / 5), 1e-10, [&](std::size_t c) {
    const int n = 1 + static_cast<int>(c % 4);
    DirectionNet net = DirectionNet::standard(n, seed, 128);
    DiscreteMeasure mu = cross_polytope_measure(n);
    if (c % 2 == 1) {
      CounterRng rng(seed, "verify:pipe", c);
      mu.add(normal_vector(rng, n), uniform(rng, 0.1, 1.0));
    }
    auto rep = equivalence_pipeline(mu, ConvexBody::cross_polytope(n), net);
    return rep.contains && rep.cost_preserved ? rep.bridge_gap : 1.0;
  }));
  out.push_back(max_error("fvein_search_monotone", 1, 0.0, [&](std::size_t) {
    SearchOptions opt;
    opt.iterations = 300;
    opt.restarts = 2;
    opt.seed = seed;
    auto res = fvein_search(ConvexBody::cross_polytope(2), 4, opt);
    double bad = res.found && res.certificate.valid() ? 0.0 : 1.0;
    for (std::size_t i = 1; i < res.best_history.size(); ++i)
      if (res.best_history[i] > res.best_history[i - 1]) bad = 1.0;
    return bad;
  }));
  return out;
}

}  // namespace verify

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"geometry", "measures", "metronoid", "constructions", "vertex-index"};
  return names;
}

/// suite "" or "all" runs every suite; cases defaults to 100.
inline VerifyReport run_verify(const std::string& suite, std::uint64_t seed, std::optional<int> cases) {
  const int c = cases.value_or(100);
  require(c >= 1, "verify: cases must be >= 1");
  using Fn = std::vector<PropertyResult> (*)(std::uint64_t, int);
  const std::vector<std::pair<std::string, Fn>> suites{{"geometry", verify::geometry},
                                                       {"measures", verify::measures},
                                                       {"metronoid", verify::engine},
                                                       {"constructions", verify::constructions},
                                                       {"vertex-index", verify::vertex_index}};
  VerifyReport rep;
  bool matched = false;
  for (const auto& [name, fn] : suites) {
    if (!suite.empty() && suite != "all" && suite != name) continue;
    matched = true;
    io::Json s;
    s["suite"] = name;
    io::Json props = io::Json::array();
    bool all = true;
    for (const auto& p : fn(seed, c)) {
      io::Json j;
      j["name"] = p.name;
      j["cases"] = p.cases;
      j["worst"] = p.worst;
      j["tolerance"] = p.tolerance;
      j["pass"] = p.pass;
      props.push_back(j);
      all = all && p.pass;
    }
    s["pass"] = all;
    s["properties"] = props;
    rep.json.push_back(s);
    rep.pass = rep.pass && all;
  }
  if (!matched) throw Error("verify: unknown suite \"" + suite + "\"");
  return rep;
}

}  // namespace metronoid
