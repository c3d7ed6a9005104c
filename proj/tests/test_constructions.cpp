#include "metronoid/constructions.hpp"
#include "metronoid/polygon.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace metronoid;

TEST(MeanAbsInner, ClosedFormsAndRecurrence) {
  EXPECT_NEAR(mean_abs_inner(2), 2.0 / std::numbers::pi, 1e-15);
  EXPECT_NEAR(mean_abs_inner(3), 0.5, 1e-15);
  EXPECT_NEAR(mean_abs_inner(1), 1.0, 1e-15);
  for (int n = 1; n <= 200; ++n) {
    EXPECT_NEAR(mean_abs_inner(n + 2), mean_abs_inner(n) * n / (n + 1.0), 1e-12) << n;
  }
  EXPECT_NEAR(mean_abs_inner(100) / mean_abs_inner_asymptotic(100), 1.0, 0.02);
}

TEST(MeanAbsInner, MatchesSampledSphere) {
  // Independent route: empirical E|<x, e_1>| on a sphere sample.
  for (int n : {2, 4, 7}) {
    auto mu = sample_sphere(n, 1.0, 1.0, 40000, 100 + n);
    double e = 0.0;
    for (const auto& a : mu) e += a.w * std::abs(a.x(0));
    EXPECT_NEAR(e, mean_abs_inner(n), 0.01) << n;
  }
}

TEST(SphereConstruction, MassCostAndSupport) {
  const DirectionNet net = DirectionNet::angles_2d(720);
  auto rep = sphere_construction(2, 10000, 0, net);
  EXPECT_EQ(rep.mass, 2.0);
  EXPECT_NEAR(rep.scale, std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(rep.cost, std::numbers::pi, 1e-12);
  EXPECT_LE(rep.support_error, 0.02);
  auto small = sphere_construction(3, 50, 1, DirectionNet::standard(3, 1, 200));
  EXPECT_EQ(small.mass, 2.0);
  EXPECT_NEAR(small.cost, 4.0, 1e-12);
  EXPECT_THROW(sphere_construction(3, 2, 0, DirectionNet::standard(3)), Error);
}

TEST(UniformConstruction, MassAndBounds) {
  const ConvexBody cube = ConvexBody::cube(2);
  auto rep = uniform_body_construction(cube, 2.0, 20000, 3, DirectionNet::standard(2), 5e-2);
  EXPECT_EQ(rep.mass, std::exp(2.0));
  EXPECT_EQ(rep.bound_mass, std::exp(2.0));
  EXPECT_EQ(rep.bound_cost, 2.0 * std::exp(2.0));
  EXPECT_LE(rep.cost, rep.bound_cost);
  EXPECT_TRUE(rep.containment.pass);
  auto row = evaluate_dstar_Dstar(rep, cube, 2.0);
  EXPECT_TRUE(row.verdict);
  EXPECT_EQ(row.mass, rep.mass);
  EXPECT_THROW(uniform_body_construction(cube, 3.0, 100, 0, DirectionNet::standard(2)), Error);  // R > n
  EXPECT_THROW(uniform_body_construction(cube, 1.0, 100, 0, DirectionNet::standard(2)), Error);
}

TEST(UniformConstruction, RejectsUncenteredBody) {
  ConvexBody off = ConvexBody::vpolytope({make_vector({0.0, 0.0}), make_vector({1.0, 0.0}), make_vector({0.0, 1.0})});
  EXPECT_FALSE(is_centered(off));
  EXPECT_THROW(uniform_body_construction(off, 2.0, 100, 0, DirectionNet::standard(2)), DomainError);
}

TEST(VolumeMc, KnownVolumes) {
  auto sq = volume_mc(ConvexBody::cube(2), 10000, 1);
  EXPECT_NEAR(sq.value, 4.0, 3.0 * sq.std_error + 1e-12);
  auto disk = volume_mc(ConvexBody::ball(2), 1000000, 2);
  EXPECT_NEAR(disk.value, std::numbers::pi, 0.02);
  auto oct = volume_mc(ConvexBody::cross_polytope(3), 1000000, 3);
  EXPECT_NEAR(oct.value, 4.0 / 3.0, 3.0 * oct.std_error);
}

TEST(CenteredSimplex, Geometry) {
  for (int n = 1; n <= 5; ++n) {
    ConvexBody s = centered_simplex(n);
    EXPECT_TRUE(is_simplex(s));
    EXPECT_TRUE(is_centered(s));
    EXPECT_NEAR(s.points().rowwise().mean().norm(), 0.0, 1e-12);
    for (Eigen::Index j = 0; j < s.points().cols(); ++j) EXPECT_NEAR(s.points().col(j).norm(), 1.0, 1e-12);
  }
}

TEST(Grunbaum, KnownRatios) {
  auto ball = grunbaum_ratio(ConvexBody::ball(3), unit(3, 2), 200000, 4);
  EXPECT_NEAR(ball.value, 0.5, 3.0 * ball.std_error);
  for (int n : {2, 3}) {
    ConvexBody s = centered_simplex(n);
    Vector v = s.points().col(0);
    auto r = grunbaum_ratio(s, v / v.norm(), 400000, 5);
    const double exact = std::pow(n / (n + 1.0), n);
    EXPECT_NEAR(r.value, exact, 3.0 * r.std_error) << n;
    EXPECT_GE(exact, std::exp(-1.0));
  }
}

TEST(Tail, MonteCarloAgainstClipping) {
  auto disk = tail_volume_ratio(ConvexBody::ball(2), unit(2, 0), 2.0, 400000, 6);
  const double phi = 2.0 * std::acos(0.5);
  EXPECT_NEAR(disk.value, (phi - std::sin(phi)) / (2.0 * std::numbers::pi), 3.0 * disk.std_error);
  EXPECT_NEAR(exact_cap_fraction_2d(ConvexBody::ball(2), unit(2, 0), 0.5), 0.19550, 1e-5);
  ConvexBody tri = centered_simplex(2);
  Vector v = tri.points().col(0);
  v /= v.norm();
  auto t = tail_volume_ratio(tri, v, 2.0, 400000, 7);
  EXPECT_NEAR(t.value, exact_cap_fraction_2d(tri, v, support(tri, v) / 2.0), 3.0 * t.std_error);
  // The R = 2 tail toward a vertex is the homothetic copy of ratio 1/3.
  EXPECT_NEAR(exact_cap_fraction_2d(tri, v, support(tri, v) / 2.0), 1.0 / 9.0, 1e-12);
  EXPECT_LT(1.0 / 9.0, tail_bound(2, 2.0));
  EXPECT_GE(1.0 / 9.0, std::pow(0.5, 2) / std::exp(1.0));
}

TEST(Tail, InfiniteRIsGrunbaum) {
  ConvexBody s = centered_simplex(3);
  Vector u = make_vector({0.3, -0.2, 0.9});
  auto a = tail_volume_ratio(s, u, std::numeric_limits<double>::infinity(), 50000, 8);
  auto b = grunbaum_ratio(s, u, 50000, 8);
  EXPECT_EQ(a.value, b.value);
}

TEST(Tail, BoundValues) {
  EXPECT_DOUBLE_EQ(tail_bound(2, 2.0), std::exp(-2.0));
  EXPECT_DOUBLE_EQ(tail_bound(3, 3.0), std::exp(-2.0));
  EXPECT_DOUBLE_EQ(tail_bound(3, 2.0), std::exp(-3.0));
}

TEST(TailConvexity, Examples) {
  auto same = tail_convexity_check([](double t) { return 2.0 - t; }, 2.0, 1);
  EXPECT_NEAR(same.lhs, same.rhs, 1e-9);
  EXPECT_TRUE(same.holds);
  // f = 1 on [0, 2]: lhs = 1/2; the line through (1, 1), (2, 0) has tail
  // 1/2 over total 1/2 + (area under the line on [0,1] = 3/2), so 1/4.
  auto flat = tail_convexity_check([](double) { return 1.0; }, 2.0, 1);
  EXPECT_NEAR(flat.lhs, 0.5, 1e-9);
  EXPECT_NEAR(flat.rhs, 0.25, 1e-9);
  EXPECT_TRUE(flat.holds);
  auto ell = tail_convexity_check([](double t) { return 0.7 * std::sqrt(std::max(0.0, 1.0 - t * t / 9.0)); }, 3.0, 2);
  EXPECT_TRUE(ell.holds);
  EXPECT_THROW(tail_convexity_check([](double t) { return t * t; }, 2.0, 1), DomainError);
}
