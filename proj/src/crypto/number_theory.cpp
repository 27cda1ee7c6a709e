#include "pfl/crypto/number_theory.hpp"

#include <array>

#include "pfl/errors.hpp"

namespace pfl {
namespace {

constexpr std::array<std::uint32_t, 53> kSmallPrimes = {
    3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,  67,
    71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157,
    163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

bool has_small_factor(const BigUint& n) {
  for (std::uint32_t p : kSmallPrimes) {
    if (mpz_cmp_ui(n.raw(), p) == 0) return false;
    if (mpz_divisible_ui_p(n.raw(), p)) return true;
  }
  return false;
}

}  // namespace

BigUint mod_pow(const BigUint& base, const BigUint& exp, const BigUint& modulus) {
  if (modulus < BigUint(2)) throw InputError("mod_pow: modulus must be >= 2");
  BigUint out;
  mpz_powm(out.raw(), base.raw(), exp.raw(), modulus.raw());
  return out;
}

BigUint mod_mul(const BigUint& a, const BigUint& b, const BigUint& modulus) {
  if (modulus.is_zero()) throw InputError("mod_mul: zero modulus");
  BigUint out;
  mpz_mul(out.raw(), a.raw(), b.raw());
  mpz_fdiv_r(out.raw(), out.raw(), modulus.raw());
  return out;
}

BigUint gcd(BigUint a, BigUint b) {
  while (!b.is_zero()) {
    BigUint r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

BigUint lcm(const BigUint& a, const BigUint& b) {
  if (a.is_zero() || b.is_zero()) return BigUint();
  return a / gcd(a, b) * b;
}

BigUint mod_inverse(const BigUint& a, const BigUint& m) {
  if (m < BigUint(2)) throw InputError("mod_inverse: modulus must be >= 2");
  // Extended Euclid keeping only the coefficient of `a`, reduced mod m so
  // it stays non-negative: t_{k+1} = t_{k-1} - q_k t_k (mod m).
  BigUint r_prev = m;
  BigUint r = a % m;
  BigUint t_prev(0);
  BigUint t(1);
  while (!r.is_zero()) {
    BigUint q = r_prev / r;
    BigUint r_next = r_prev - q * r;
    BigUint qt = mod_mul(q, t, m);
    BigUint t_next = (t_prev + m - qt) % m;
    r_prev = std::move(r);
    r = std::move(r_next);
    t_prev = std::move(t);
    t = std::move(t_next);
  }
  if (r_prev != BigUint(1)) {
    throw NoInverseError("mod_inverse: " + a.to_string() + " has no inverse modulo " + m.to_string());
  }
  return t_prev;
}

BigUint random_bits(std::size_t bits, SeededRng& rng) {
  const std::size_t words = (bits + 63) / 64;
  std::vector<std::uint8_t> bytes;
  bytes.reserve(words * 8);
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t x = rng.next_u64();
    for (int b = 7; b >= 0; --b) bytes.push_back(static_cast<std::uint8_t>(x >> (8 * b)));
  }
  BigUint out = BigUint::from_bytes_be(bytes);
  out >>= words * 64 - bits;
  return out;
}

BigUint random_below(const BigUint& bound, SeededRng& rng) {
  if (bound.is_zero()) throw InputError("random_below: bound must be positive");
  const std::size_t bits = bound.bit_length();
  while (true) {
    BigUint candidate = random_bits(bits, rng);
    if (candidate < bound) return candidate;
  }
}

bool is_probable_prime(const BigUint& n, int rounds, SeededRng& rng) {
  if (n < BigUint(4)) return n == BigUint(2) || n == BigUint(3);
  if (!n.is_odd()) return false;

  const BigUint n_minus_1 = n - BigUint(1);
  BigUint d = n_minus_1;
  std::size_t s = 0;
  while (!d.is_odd()) {
    d >>= 1;
    ++s;
  }

  const BigUint witness_span = n - BigUint(3);  // witnesses in [2, n-2]
  for (int round = 0; round < rounds; ++round) {
    const BigUint a = random_below(witness_span, rng) + BigUint(2);
    BigUint x = mod_pow(a, d, n);
    if (x == BigUint(1) || x == n_minus_1) continue;
    bool composite = true;
    for (std::size_t i = 1; i < s; ++i) {
      x = mod_mul(x, x, n);
      if (x == n_minus_1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

BigUint gen_prime(std::size_t bits, SeededRng& rng) {
  if (bits < 16) throw InputError("gen_prime: bits must be >= 16");
  while (true) {
    BigUint candidate = random_bits(bits, rng);
    mpz_setbit(candidate.raw(), bits - 1);
    mpz_setbit(candidate.raw(), 0);
    if (has_small_factor(candidate)) continue;
    if (is_probable_prime(candidate, kMillerRabinRounds, rng)) return candidate;
  }
}

}  // namespace pfl
