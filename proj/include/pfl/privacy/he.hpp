#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfl/crypto/rng.hpp"
#include "pfl/model/param_vector.hpp"
#include "pfl/privacy/config.hpp"
#include "pfl/privacy/envelope.hpp"
#include "pfl/privacy/paillier.hpp"

namespace pfl::privacy {

// Fixed-point encodes each coordinate into Z_n and encrypts it.
Envelope he_protect(const ParamVector& update, const PaillierPublicKey& key, const PrivacyConfig& cfg,
                    SeededRng& rng);

// Coordinate-wise ciphertext product mod n^2, i.e. encryption of the
// plaintext sum. Needs only the public key.
std::vector<BigUint> he_aggregate(std::span<const Envelope> envelopes, const PaillierPublicKey& key);

// Decrypts the aggregate, decodes and divides by the client count. Throws
// EncodeOverflowError when a decoded sum lies outside the configured range.
ParamVector he_recover(std::span<const BigUint> aggregate, const PaillierKeypair& keys, std::size_t num_clients,
                       const PrivacyConfig& cfg);

// Holder of the Paillier secret key. The aggregating server never gets one
// of these; it forwards the folded ciphertexts here for the final decrypt.
class KeyAuthority {
 public:
  KeyAuthority(std::size_t key_bits, SeededRng& rng) : keys_(paillier_keygen(key_bits, rng)) {}

  const PaillierPublicKey& public_key() const { return keys_.public_key; }
  ParamVector recover(std::span<const BigUint> aggregate, std::size_t num_clients, const PrivacyConfig& cfg) const {
    return he_recover(aggregate, keys_, num_clients, cfg);
  }
  const PaillierKeypair& keypair_for_testing() const { return keys_; }

 private:
  PaillierKeypair keys_;
};

}  // namespace pfl::privacy
