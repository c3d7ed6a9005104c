#pragma once

// Counter-based randomness. Every random draw is a pure function of
// (seed, stream, counter), so results never depend on scheduling.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace metronoid {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// FNV-1a, used to turn an operation tag into a stream id.
inline constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Philox4x32-10 block function (Salmon et al.).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    std::array<std::uint32_t, 4> next = {
        static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    ctr = next;
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// A stream of doubles keyed by (seed, stream). Draw k of the stream is
/// philox(counter = (k, stream-hi), key = seed-mix).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(splitmix64(seed)), stream_(stream) {}
  CounterRng(std::uint64_t seed, std::string_view tag, std::uint64_t index)
      : CounterRng(seed, splitmix64(tag_hash(tag) ^ splitmix64(index))) {}

  std::uint64_t next_u64() {
    if (cached_ == 0) refill();
    std::uint64_t v = (static_cast<std::uint64_t>(block_[4 - cached_]) << 32) | block_[5 - cached_];
    cached_ -= 2;
    return v;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (both outputs used).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_open();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  void refill() {
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(counter_),
                                        static_cast<std::uint32_t>(counter_ >> 32),
                                        static_cast<std::uint32_t>(stream_),
                                        static_cast<std::uint32_t>(stream_ >> 32)};
    block_ = philox4x32(ctr, {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    ++counter_;
    cached_ = 4;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int cached_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace metronoid
