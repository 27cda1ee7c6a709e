#include "pfl/privacy/he.hpp"

#include <cmath>
#include <string>

#include "pfl/errors.hpp"
#include "pfl/privacy/fixed_point.hpp"

namespace pfl::privacy {

Envelope he_protect(const ParamVector& update, const PaillierPublicKey& key, const PrivacyConfig& cfg,
                    SeededRng& rng) {
  CiphertextPayload payload;
  payload.ciphertexts.reserve(update.size());
  for (std::size_t i = 0; i < update.size(); ++i) {
    if (!(std::abs(update[i]) <= cfg.max_abs_value)) {
      throw EncodeOverflowError("coordinate " + std::to_string(i) + " exceeds the encoder range");
    }
    payload.ciphertexts.push_back(key.encrypt(fp_encode(update[i], cfg.scale_bits, key.n), rng));
  }
  return Envelope(std::move(payload));
}

std::vector<BigUint> he_aggregate(std::span<const Envelope> envelopes, const PaillierPublicKey& key) {
  if (envelopes.empty()) throw InputError("he_aggregate: no envelopes");
  for (const Envelope& e : envelopes) {
    if (!e.holds<CiphertextPayload>()) throw ProtocolError("he_aggregate: envelope does not carry ciphertexts");
  }
  std::vector<BigUint> acc = envelopes.front().as<CiphertextPayload>().ciphertexts;
  for (std::size_t k = 1; k < envelopes.size(); ++k) {
    const auto& cts = envelopes[k].as<CiphertextPayload>().ciphertexts;
    if (cts.size() != acc.size()) {
      throw InputError("he_aggregate: envelope " + std::to_string(k) + " has dimension " +
                       std::to_string(cts.size()) + ", expected " + std::to_string(acc.size()));
    }
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = key.add(acc[i], cts[i]);
  }
  return acc;
}

ParamVector he_recover(std::span<const BigUint> aggregate, const PaillierKeypair& keys, std::size_t num_clients,
                       const PrivacyConfig& cfg) {
  if (num_clients == 0) throw InputError("he_recover: num_clients must be positive");
  const double limit = cfg.max_abs_value * static_cast<double>(num_clients);
  ParamVector out(aggregate.size());
  for (std::size_t i = 0; i < aggregate.size(); ++i) {
    const BigUint plain = paillier_decrypt_crt(keys, aggregate[i]);
    const double sum = fp_decode(plain, cfg.scale_bits, keys.public_key.n);
    if (!(std::abs(sum) <= limit)) {
      throw EncodeOverflowError("he_recover: decoded sum at coordinate " + std::to_string(i) +
                                " is outside the configured range");
    }
    out[i] = sum / static_cast<double>(num_clients);
  }
  return out;
}

}  // namespace pfl::privacy
