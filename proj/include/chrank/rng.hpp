#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace chrank {

// splitmix64 finalizer; the workhorse for deriving independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic seed for a substream keyed by (master, keys...).
/// Identical at any parallelism level: the derivation depends only on the key
/// tuple, never on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> keys) {
  std::uint64_t s = mix64(master);
  for (std::uint64_t k : keys) s = mix64(s ^ mix64(k));
  return s;
}

/// mt19937_64 engine with hand-rolled draws. The engine output sequence is
/// pinned by the standard; std::*_distribution is not, so uniform and normal
/// variates are generated here to keep runs reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Unbiased uniform draw in [0, bound); bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t x, r;
    do {
      x = engine_();
      r = x % bound;
    } while (x - r > std::uint64_t(0) - bound);
    return r;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; the spare variate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    const double u2 = unit();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace chrank
