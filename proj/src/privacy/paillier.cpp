#include "pfl/privacy/paillier.hpp"

#include "pfl/crypto/number_theory.hpp"
#include "pfl/errors.hpp"

namespace pfl::privacy {
namespace {

// L_d(x) = (x - 1) / d
BigUint l_function(const BigUint& x, const BigUint& d) { return (x - BigUint(1)) / d; }

}  // namespace

BigUint PaillierPublicKey::encrypt(const BigUint& plaintext, SeededRng& rng) const {
  if (!(plaintext < n)) throw InputError("paillier encrypt: plaintext must be < n");
  BigUint r;
  do {
    r = random_below(n, rng);
  } while (r.is_zero() || gcd(r, n) != BigUint(1));
  // g^m = (1 + n)^m = 1 + m n (mod n^2)
  BigUint gm = (plaintext * n + BigUint(1)) % n_squared;
  return mod_mul(gm, mod_pow(r, n, n_squared), n_squared);
}

BigUint PaillierPublicKey::add(const BigUint& c1, const BigUint& c2) const { return mod_mul(c1, c2, n_squared); }

BigUint PaillierPublicKey::scalar_mul(const BigUint& c, const BigUint& k) const { return mod_pow(c, k, n_squared); }

PaillierKeypair paillier_keygen(std::size_t key_bits, SeededRng& rng) {
  if (key_bits < 256 || key_bits % 2 != 0) throw InputError("paillier_keygen: key_bits must be even and >= 256");
  const std::size_t half = key_bits / 2;
  while (true) {
    BigUint p = gen_prime(half, rng);
    BigUint q = gen_prime(half, rng);
    if (p == q) continue;
    BigUint n = p * q;
    if (n.bit_length() != key_bits) continue;
    const BigUint p1 = p - BigUint(1);
    const BigUint q1 = q - BigUint(1);
    if (gcd(n, p1 * q1) != BigUint(1)) continue;

    PaillierKeypair keys;
    PaillierPublicKey& pub = keys.public_key;
    pub.n = n;
    pub.n_squared = n * n;
    pub.g = n + BigUint(1);
    pub.key_bits = key_bits;

    PaillierSecretKey& sec = keys.secret_key;
    sec.lambda = lcm(p1, q1);
    sec.mu = mod_inverse(sec.lambda % n, n);
    sec.p_squared = p * p;
    sec.q_squared = q * q;
    sec.hp = mod_inverse(l_function(mod_pow(pub.g, p1, sec.p_squared), p), p);
    sec.hq = mod_inverse(l_function(mod_pow(pub.g, q1, sec.q_squared), q), q);
    sec.q_inv_p = mod_inverse(q % p, p);
    sec.p = std::move(p);
    sec.q = std::move(q);
    return keys;
  }
}

BigUint paillier_decrypt(const PaillierKeypair& keys, const BigUint& ciphertext) {
  const PaillierPublicKey& pub = keys.public_key;
  const BigUint u = mod_pow(ciphertext, keys.secret_key.lambda, pub.n_squared);
  return mod_mul(l_function(u, pub.n), keys.secret_key.mu, pub.n);
}

BigUint paillier_decrypt_crt(const PaillierKeypair& keys, const BigUint& ciphertext) {
  const PaillierSecretKey& sec = keys.secret_key;
  const BigUint p1 = sec.p - BigUint(1);
  const BigUint q1 = sec.q - BigUint(1);
  const BigUint mp = mod_mul(l_function(mod_pow(ciphertext % sec.p_squared, p1, sec.p_squared), sec.p), sec.hp, sec.p);
  const BigUint mq = mod_mul(l_function(mod_pow(ciphertext % sec.q_squared, q1, sec.q_squared), sec.q), sec.hq, sec.q);
  // m = mq + q * ((mp - mq) q^{-1} mod p)
  const BigUint diff = (mp + sec.p - mq % sec.p) % sec.p;
  return mq + sec.q * mod_mul(diff, sec.q_inv_p, sec.p);
}

}  // namespace pfl::privacy
