#pragma once

#include <cstddef>
#include <cstdint>

#include "pfl/crypto/big_uint.hpp"
#include "pfl/crypto/rng.hpp"

namespace pfl {

inline constexpr int kMillerRabinRounds = 40;

// base^exp mod modulus. Throws InputError when modulus < 2.
BigUint mod_pow(const BigUint& base, const BigUint& exp, const BigUint& modulus);
BigUint mod_mul(const BigUint& a, const BigUint& b, const BigUint& modulus);

BigUint gcd(BigUint a, BigUint b);
BigUint lcm(const BigUint& a, const BigUint& b);

// x with a*x = 1 (mod m), by the extended Euclidean algorithm.
// Throws InputError when m < 2 and NoInverseError when gcd(a, m) != 1.
BigUint mod_inverse(const BigUint& a, const BigUint& m);

// Uniform in [0, bound); bound must be positive.
BigUint random_below(const BigUint& bound, SeededRng& rng);
// Uniform over all integers with at most `bits` bits.
BigUint random_bits(std::size_t bits, SeededRng& rng);

// Miller-Rabin with `rounds` random bases drawn from `rng`.
bool is_probable_prime(const BigUint& n, int rounds, SeededRng& rng);

// Probable prime with exactly `bits` bits (top bit set). bits >= 16.
BigUint gen_prime(std::size_t bits, SeededRng& rng);

// Element of Z/2^64. Wrapping unsigned arithmetic is exactly the ring.
struct RingElement {
  std::uint64_t value = 0;

  friend constexpr RingElement operator+(RingElement a, RingElement b) { return {a.value + b.value}; }
  friend constexpr RingElement operator-(RingElement a, RingElement b) { return {a.value - b.value}; }
  friend constexpr RingElement operator-(RingElement a) { return {0 - a.value}; }
  friend constexpr RingElement operator*(RingElement a, RingElement b) { return {a.value * b.value}; }
  friend constexpr bool operator==(RingElement a, RingElement b) = default;
};

static_assert(sizeof(RingElement) == sizeof(std::uint64_t));

}  // namespace pfl
