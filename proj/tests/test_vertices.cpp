#include "metronoid/metronoid.hpp"
#include "metronoid/polygon.hpp"

#include <gtest/gtest.h>

using namespace metronoid;

namespace {

bool same_set(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, (p - q).cwiseAbs().maxCoeff());
    if (best > tol) return false;
  }
  return true;
}

}  // namespace

TEST(Vertices, CrossPolytope) {
  DiscreteMeasure mu(2);
  for (int i = 0; i < 2; ++i) {
    mu.add(unit(2, i), 1.0);
    mu.add(-unit(2, i), 1.0);
  }
  Metronoid m(mu);
  std::vector<Vector> expect{unit(2, 0), unit(2, 1), -unit(2, 0), -unit(2, 1)};
  EXPECT_TRUE(same_set(vertices_sweep_2d(m), expect, 1e-12));
  EXPECT_TRUE(same_set(vertices_bruteforce(m), expect, 1e-12));
}

TEST(Vertices, UnitMassIsOnePoint) {
  DiscreteMeasure mu(2);
  mu.add(make_vector({1.0, 0.0}), 0.5);
  mu.add(make_vector({0.0, 1.0}), 0.5);
  auto v = vertices(Metronoid(mu));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NEAR((v[0] - make_vector({0.5, 0.5})).norm(), 0.0, 1e-12);
}

TEST(Vertices, OriginAndTwoHalves) {
  // delta_0 + 1/2 delta_{(2,0)} + 1/2 delta_{(0,2)}: the quadrilateral
  // (1,0), (1,1), (0,1) and the barycenter of the two off-origin halves.
  DiscreteMeasure mu(2);
  mu.add(Vector::Zero(2), 1.0);
  mu.add(make_vector({2.0, 0.0}), 0.5);
  mu.add(make_vector({0.0, 2.0}), 0.5);
  Metronoid m(mu);
  auto a = vertices_sweep_2d(m), b = vertices_bruteforce(m);
  EXPECT_TRUE(same_set(a, b, 1e-9));
  std::vector<Vector> expect{make_vector({1.0, 0.0}), make_vector({1.0, 1.0}), make_vector({0.0, 1.0}),
                             make_vector({0.0, 0.0})};
  EXPECT_TRUE(same_set(a, expect, 1e-12));
}

TEST(Vertices, SweepMatchesBruteForceAndSupport) {
  for (std::uint64_t c = 0; c < 60; ++c) {
    CounterRng rng(3, "test-verts", c);
    DiscreteMeasure mu(2);
    const int atoms = 2 + static_cast<int>(rng.uniform() * 9);
    for (int i = 0; i < atoms; ++i) mu.add(make_vector({rng.normal(), rng.normal()}), 0.2 + rng.uniform());
    if (total_mass(mu) < 1.0) continue;
    Metronoid m(mu);
    auto a = vertices_sweep_2d(m), b = vertices_bruteforce(m);
    EXPECT_TRUE(same_set(a, b, 1e-9)) << "case " << c;
    // The polygon on the sweep output has the metronoid's support function.
    DirectionNet net = DirectionNet::angles_2d(90);
    for (std::size_t k = 0; k < net.size(); ++k) {
      double hv = -std::numeric_limits<double>::infinity();
      for (const auto& v : a) hv = std::max(hv, v.dot(net[k]));
      EXPECT_NEAR(hv, msupport(m, net[k]), 1e-9);
    }
  }
}

TEST(Vertices, CounterClockwiseOrder) {
  DiscreteMeasure mu(2);
  mu.add(make_vector({3.0, 0.0}), 1.0);
  mu.add(make_vector({0.0, 3.0}), 1.0);
  mu.add(make_vector({-3.0, -3.0}), 1.0);
  auto v = vertices_sweep_2d(Metronoid(mu));
  ASSERT_GE(v.size(), 3u);
  Polygon p;
  for (const auto& x : v) p.emplace_back(x(0), x(1));
  EXPECT_GT(polygon_area(p), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& o = p[i];
    const auto& q = p[(i + 1) % p.size()];
    const auto& r = p[(i + 2) % p.size()];
    double cross = (q - o).x() * (r - q).y() - (q - o).y() * (r - q).x();
    EXPECT_GT(cross, 0.0);
  }
}

TEST(Vertices, ThreeDimensionsBruteForce) {
  DiscreteMeasure mu(3);
  for (int i = 0; i < 3; ++i) {
    mu.add(unit(3, i), 1.0);
    mu.add(-unit(3, i), 1.0);
  }
  auto v = vertices(Metronoid(mu));
  EXPECT_EQ(v.size(), 6u);
  for (const auto& x : v) EXPECT_NEAR(x.lpNorm<1>(), 1.0, 1e-12);
}
