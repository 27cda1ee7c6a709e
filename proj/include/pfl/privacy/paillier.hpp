#pragma once

#include <cstddef>

#include "pfl/crypto/big_uint.hpp"
#include "pfl/crypto/rng.hpp"

namespace pfl::privacy {

// Paillier public key with the g = n + 1 generator.
struct PaillierPublicKey {
  BigUint n;
  BigUint n_squared;
  BigUint g;
  std::size_t key_bits = 0;

  // (1 + m n) r^n mod n^2 with r uniform in Z_n^*. Requires m < n.
  BigUint encrypt(const BigUint& plaintext, SeededRng& rng) const;
  // Enc(a) * Enc(b) mod n^2 = Enc(a + b mod n).
  BigUint add(const BigUint& c1, const BigUint& c2) const;
  // Enc(a)^k mod n^2 = Enc(k a mod n).
  BigUint scalar_mul(const BigUint& c, const BigUint& k) const;
};

// Secret half, held by the key authority only.
struct PaillierSecretKey {
  BigUint lambda;  // lcm(p - 1, q - 1)
  BigUint mu;      // lambda^{-1} mod n
  BigUint p;
  BigUint q;
  // CRT precomputation.
  BigUint p_squared;
  BigUint q_squared;
  BigUint hp;      // (L_p(g^{p-1} mod p^2))^{-1} mod p
  BigUint hq;
  BigUint q_inv_p; // q^{-1} mod p
};

struct PaillierKeypair {
  PaillierPublicKey public_key;
  PaillierSecretKey secret_key;
};

// n = p q with distinct primes of key_bits / 2 bits each, and n has exactly
// key_bits bits. Throws InputError when key_bits < 256 or is odd.
PaillierKeypair paillier_keygen(std::size_t key_bits, SeededRng& rng);

// L(c^lambda mod n^2) * mu mod n.
BigUint paillier_decrypt(const PaillierKeypair& keys, const BigUint& ciphertext);
// Same result through the CRT split mod p^2 and q^2.
BigUint paillier_decrypt_crt(const PaillierKeypair& keys, const BigUint& ciphertext);

}  // namespace pfl::privacy
