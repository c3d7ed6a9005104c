#include "metronoid/measure.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace metronoid;

namespace {

DiscreteMeasure two_atoms() {
  DiscreteMeasure mu(2);
  mu.add(make_vector({1.0, 2.0}), 0.5);
  mu.add(make_vector({-3.0, 0.0}), 1.5);
  return mu;
}

}  // namespace

TEST(Measure, RejectsBadAtoms) {
  DiscreteMeasure mu(2);
  EXPECT_THROW(mu.add(make_vector({1.0, 0.0}), -0.5), DomainError);
  EXPECT_THROW(mu.add(make_vector({1.0, 0.0}), 0.0), DomainError);
  EXPECT_THROW(mu.add(make_vector({1.0, 0.0}), std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(mu.add(make_vector({1.0, std::nan("")}), 1.0), Error);
  EXPECT_THROW(mu.add(make_vector({1.0, 0.0, 0.0}), 1.0), DimensionError);
  EXPECT_THROW(DiscreteMeasure(0), Error);
}

TEST(Measure, MassAndCost) {
  auto mu = two_atoms();
  EXPECT_EQ(total_mass(mu), 2.0);
  // 0.5 * |(1,2)|_1 + 1.5 * 3
  EXPECT_DOUBLE_EQ(transport_cost(mu, ConvexBody::cross_polytope(2)), 6.0);
  EXPECT_DOUBLE_EQ(transport_cost(mu, ConvexBody::cube(2)), 5.5);
  EXPECT_DOUBLE_EQ(transport_cost(mu, ConvexBody::ball(2)), 0.5 * std::sqrt(5.0) + 4.5);
  EXPECT_THROW(transport_cost(mu, ConvexBody::ball(3)), Error);
}

TEST(Measure, EqualWeightsSumExactly) {
  for (std::size_t count : {1u, 3u, 7u, 1000u, 10000u}) {
    for (double mass : {1.0, 2.0, std::exp(2.0), 0.1}) {
      auto w = equal_weights(mass, count);
      double s = 0.0;
      for (double x : w) s += x;
      EXPECT_EQ(s, mass) << count << " " << mass;
      EXPECT_NEAR(w.back(), mass / count, 1e-12 * mass);
    }
  }
}

TEST(Measure, MergeCombinesCoincidentAtoms) {
  DiscreteMeasure mu(2);
  mu.add(make_vector({1.0, 0.0}), 0.25);
  mu.add(make_vector({0.0, 1.0}), 0.5);
  mu.add(make_vector({1.0, 1e-14}), 0.25);
  auto m = merge_atoms(mu);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(total_mass(m), 1.0);
  EXPECT_TRUE(merge_atoms(m).size() == 2u);
}

TEST(Measure, PushforwardMovesAtoms) {
  auto mu = two_atoms();
  Matrix t(2, 2);
  t << 0.0, -1.0, 1.0, 0.0;
  auto nu = pushforward(t, mu);
  EXPECT_EQ(nu[0].x, make_vector({-2.0, 1.0}));
  EXPECT_EQ(nu[1].w, 1.5);
  EXPECT_THROW(pushforward(Matrix::Identity(3, 3), mu), Error);
}

TEST(Measure, SymmetrizeSplitsMass) {
  auto nu = symmetrize(two_atoms());
  EXPECT_TRUE(is_symmetric_measure(nu));
  EXPECT_EQ(total_mass(nu), 2.0);
  EXPECT_EQ(nu.size(), 4u);
  EXPECT_FALSE(is_symmetric_measure(two_atoms()));
  // Already symmetric input is a fixed point up to ordering.
  auto again = symmetrize(nu);
  EXPECT_EQ(total_mass(again), 2.0);
  EXPECT_NEAR(transport_cost(again, ConvexBody::ball(2)), transport_cost(nu, ConvexBody::ball(2)), 1e-14);
}

TEST(Measure, RadialRescale) {
  auto mu = two_atoms();
  auto nu = radial_rescale(mu, {2.0, 3.0});
  EXPECT_EQ(nu.size(), 3u);
  EXPECT_EQ(nu[0].x, make_vector({2.0, 4.0}));
  EXPECT_EQ(nu[0].w, 0.25);
  EXPECT_EQ(nu[2].w, 1.0);
  EXPECT_TRUE(is_origin(nu[2].x));
  EXPECT_DOUBLE_EQ(transport_cost(nu, ConvexBody::ball(2)), transport_cost(mu, ConvexBody::ball(2)));
  EXPECT_THROW(radial_rescale(mu, {0.5, 2.0}), DomainError);
  EXPECT_THROW(radial_rescale(mu, {2.0}), Error);
}

TEST(Measure, NormalizeAndTruncate) {
  auto p = normalize_probability(two_atoms());
  EXPECT_EQ(total_mass(p), 1.0);
  EXPECT_EQ(p[1].x, make_vector({-6.0, 0.0}));
  DiscreteMeasure light(1);
  light.add(make_vector({1.0}), 0.5);
  EXPECT_THROW(normalize_probability(light), DomainError);
  auto t = truncate(two_atoms(), 2.5);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(total_mass(t), 2.5);
}

TEST(Measure, DensityFactor) {
  EXPECT_DOUBLE_EQ(uniform_density_factor(3, 3.0), std::exp(2.0));
  EXPECT_DOUBLE_EQ(uniform_density_factor(2, 2.0), std::exp(2.0));
  EXPECT_DOUBLE_EQ(uniform_density_factor(1, 5.0), std::exp(1.0));
  EXPECT_THROW(uniform_density_factor(2, 1.0), Error);
}

TEST(Sampler, SphereSamples) {
  auto one = sample_sphere(2, 1.0, 1.0, 1, 0);
  EXPECT_NEAR(one[0].x.norm(), 1.0, 1e-15);
  auto mu = sample_sphere(2, 1.0, 1.0, 10000, 5);
  Vector mean = Vector::Zero(2);
  for (const auto& a : mu) mean += a.w * a.x;
  EXPECT_LE(mean.norm(), 0.03);
  auto mu3 = sample_sphere(3, 1.0, 1.0, 10000, 6);
  double e = 0.0;
  for (const auto& a : mu3) e += a.w * std::abs(a.x(0));
  EXPECT_NEAR(e, 0.5, 0.02);
  EXPECT_EQ(total_mass(sample_sphere(4, 2.0, 2.0, 777, 1)), 2.0);
}

TEST(Sampler, BodyUniformMassAndSupport) {
  auto mu = sample_body_uniform(ConvexBody::cross_polytope(3), 2.0, 5000, 9);
  EXPECT_EQ(total_mass(mu), std::exp(3.0));  // e^{1 + (n-1)/(R-1)}
  for (const auto& a : mu) EXPECT_LE(a.x.lpNorm<1>(), 2.0 + 1e-12);
  auto in = sample_in_body(ConvexBody::ball(2, 3.0), 6.0, 200, 1);
  EXPECT_EQ(in.size(), 200u);
  for (const auto& a : in) EXPECT_LE(a.x.norm(), 3.0 + 1e-12);
}

TEST(Sampler, SeedsAreStreams) {
  auto a = sample_sphere(3, 1.0, 1.0, 100, 42), b = sample_sphere(3, 1.0, 1.0, 100, 42);
  auto c = sample_sphere(3, 1.0, 1.0, 100, 43);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].x, b[i].x);
  EXPECT_NE(a[0].x, c[0].x);
  // A longer run extends a shorter one: atom i depends on (seed, i) only.
  auto longer = sample_sphere(3, 1.0, 1.0, 150, 42);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].x, longer[i].x);
}

TEST(Grid, ResolutionAndSnapping) {
  // sqrt(2) / 2^m <= 0.1 / 2 needs 2^m >= 28.3, so m = 5.
  EXPECT_EQ(required_resolution(2, 2.0, 0.1), 5);
  EXPECT_EQ(grid_index(0.3, 0.25), 1.0);
  EXPECT_EQ(grid_index(0.375, 0.25), 2.0);  // half-open cells [a - h/2, a + h/2)
  EXPECT_EQ(grid_index(-0.125, 0.25), 0.0);
  EXPECT_EQ(grid_index(-0.126, 0.25), -1.0);
  DiscreteMeasure mu(2);
  mu.add(make_vector({0.3, 0.05}), 0.5);
  mu.add(make_vector({5.0, 0.0}), 0.25);   // outside the cube: to the origin
  mu.add(make_vector({0.01, 0.02}), 0.25);  // the origin cell
  auto s = snap_to_grid(mu, 1.0, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(is_origin(s[0].x));
  EXPECT_EQ(s[0].w, 0.5);
  EXPECT_EQ(s[1].x, make_vector({0.25, 0.0}));
  EXPECT_EQ(total_mass(s), total_mass(mu));
}

TEST(Grid, DiscretizeChecksResolution) {
  DiscreteMeasure mu(2);
  mu.add(make_vector({0.3, 0.05}), 2.0);
  GridSpec g;
  g.range = 1.0;
  g.eps = 0.1;
  g.resolution = 2;
  EXPECT_THROW(discretize_grid(mu, g), DomainError);
  g.resolution = required_resolution(2, 2.0, 0.1);
  auto d = discretize_grid_full(mu, g);
  EXPECT_EQ(total_mass(d.snapped), 2.0);
  EXPECT_EQ(total_mass(d.measure), 2.0);
  EXPECT_NEAR((d.measure[0].x - d.snapped[0].x / 0.8).norm(), 0.0, 1e-15);
}
