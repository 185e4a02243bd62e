#include "chrank/prime_field.hpp"

#include <string>

#include "chrank/error.hpp"

namespace chrank {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exponent,
                      std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exponent) {
    if (exponent & 1) acc = mul_mod(acc, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return acc;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 2^64.
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 3 || p >= (std::uint64_t(1) << 62) || !is_prime(p))
    fail(ErrorKind::config,
         "modulus " + std::to_string(p) + " is not an odd prime below 2^62");
}

PrimeField::Elem PrimeField::pow(Elem base, std::uint64_t exponent) const {
  return pow_mod(base, exponent, p_);
}

PrimeField::Elem PrimeField::inv(Elem a) const {
  if (a == 0)
    fail(ErrorKind::config, "zero has no inverse in F_p");
  return pow(a, p_ - 2);  // Fermat
}

PrimeField::Elem PrimeField::reduce(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += static_cast<std::int64_t>(p_);
  return static_cast<Elem>(r);
}

}  // namespace chrank
