#pragma once

// Deterministic direction nets on the unit sphere.

#include "metronoid/core.hpp"
#include "metronoid/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cstdint>
#include <numbers>

namespace metronoid {

enum class NetKind { ExactAngles2D, LowDiscrepancy };

class DirectionNet {
 public:
  /// theta_k = (cos 2 pi k / count, sin 2 pi k / count).
  static DirectionNet angles_2d(int count) {
    require(count >= 1, "direction net: count must be >= 1");
    DirectionNet net(NetKind::ExactAngles2D, 2, count, 0);
    for (int k = 0; k < count; ++k) {
      double a = 2.0 * std::numbers::pi * k / count;
      net.dirs_.push_back(make_vector({std::cos(a), std::sin(a)}));
    }
    return net;
  }

  /// Shifted Halton points pushed through the Gaussian quantile and then
  /// normalized. The shift comes from the seed.
  static DirectionNet low_discrepancy(int n, int count, std::uint64_t seed) {
    require(n >= 1, "direction net: dimension must be >= 1");
    require(count >= 1, "direction net: count must be >= 1");
    DirectionNet net(NetKind::LowDiscrepancy, n, count, seed);
    if (n == 1) {
      for (int k = 0; k < count; ++k) net.dirs_.push_back(make_vector({k % 2 == 0 ? 1.0 : -1.0}));
      return net;
    }
    std::vector<double> shift(static_cast<std::size_t>(n));
    CounterRng rng(seed, "net-shift", static_cast<std::uint64_t>(n));
    for (auto& s : shift) s = rng.uniform();
    const auto primes = first_primes(n);
    for (int k = 0; k < count; ++k) {
      Vector g(n);
      for (int i = 0; i < n; ++i) {
        double u = radical_inverse(static_cast<std::uint64_t>(k) + 1, primes[static_cast<std::size_t>(i)]) +
                   shift[static_cast<std::size_t>(i)];
        u -= std::floor(u);
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        g(i) = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
      }
      double norm = g.norm();
      if (!(norm > 1e-300)) g = unit(n, k % n), norm = 1.0;
      net.dirs_.push_back(g / norm);
    }
    return net;
  }

  /// 720 exact angles in the plane, 2000 low-discrepancy points otherwise;
  /// an explicit count overrides the size.
  static DirectionNet standard(int n, std::uint64_t seed = 0, int count = 0) {
    if (n == 2) return angles_2d(count > 0 ? count : 720);
    return low_discrepancy(n, count > 0 ? count : (n == 1 ? 2 : 2000), seed);
  }

  static DirectionNet from_directions(std::vector<Vector> dirs) {
    require(!dirs.empty(), "direction net: empty");
    DirectionNet net(NetKind::LowDiscrepancy, static_cast<int>(dirs.front().size()), static_cast<int>(dirs.size()), 0);
    for (auto& d : dirs) {
      require_dim(d, net.dim_, "net direction");
      double nrm = d.norm();
      require(nrm > 0.0, "net direction must be nonzero");
      net.dirs_.push_back(d / nrm);
    }
    return net;
  }

  NetKind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::size_t size() const { return dirs_.size(); }
  std::uint64_t seed() const { return seed_; }
  const Vector& operator[](std::size_t i) const { return dirs_[i]; }
  const std::vector<Vector>& directions() const { return dirs_; }
  auto begin() const { return dirs_.begin(); }
  auto end() const { return dirs_.end(); }

 private:
  DirectionNet(NetKind kind, int n, int count, std::uint64_t seed) : kind_(kind), dim_(n), seed_(seed) {
    dirs_.reserve(static_cast<std::size_t>(count));
  }

  static std::vector<std::uint64_t> first_primes(int count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = 2; static_cast<int>(out.size()) < count; ++c) {
      bool prime = true;
      for (auto p : out) {
        if (p * p > c) break;
        if (c % p == 0) {
          prime = false;
          break;
        }
      }
      if (prime) out.push_back(c);
    }
    return out;
  }

  static double radical_inverse(std::uint64_t k, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
    while (k > 0) {
      r += f * static_cast<double>(k % base);
      k /= base;
      f *= inv;
    }
    return r;
  }

  NetKind kind_;
  int dim_;
  std::uint64_t seed_;
  std::vector<Vector> dirs_;
};

}  // namespace metronoid
