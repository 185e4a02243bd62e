#pragma once

#include <cstdint>

#include "chrank/rng.hpp"

namespace chrank {

/// Deterministic Miller-Rabin for 64-bit integers.
bool is_prime(std::uint64_t n);

/// Default modulus: the Mersenne prime 2^31 - 1. Large enough that a random
/// evaluation point of a degree-<=2 polynomial matrix attains the generic
/// rank except with negligible probability, small enough that products of
/// residues fit a 64-bit word before reduction.
inline constexpr std::uint64_t kDefaultPrime = (std::uint64_t(1) << 31) - 1;

/// Arithmetic in F_p. Elements are residues in [0, p); p must be an odd prime
/// below 2^62 so that sums never wrap.
class PrimeField {
 public:
  using Elem = std::uint64_t;

  explicit PrimeField(std::uint64_t p);  // throws ErrorKind::config if p is not prime

  std::uint64_t modulus() const { return p_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }

  Elem add(Elem a, Elem b) const {
    Elem s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + (p_ - b); }
  Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const {
    return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_);
  }

  Elem pow(Elem base, std::uint64_t exponent) const;
  Elem inv(Elem a) const;  // a != 0

  /// Reduce a signed integer into [0, p).
  Elem reduce(std::int64_t v) const;

  /// Uniform residue.
  Elem sample(Rng& rng) const { return rng.below(p_); }

 private:
  std::uint64_t p_;
};

}  // namespace chrank
