#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pfl/crypto/rng.hpp"
#include "pfl/model/param_vector.hpp"
#include "pfl/privacy/config.hpp"
#include "pfl/privacy/envelope.hpp"

namespace pfl::privacy {

// Splits each encoded coordinate into k additive shares in Z/2^64: the first
// k - 1 uniform, the last making the sum equal the encoding.
Envelope smpc_protect(const ParamVector& update, std::size_t num_parties, SeededRng& rng, const PrivacyConfig& cfg);

// Routes share p of every client to party p and returns each party's ring
// sum. Throws ProtocolError when an envelope carries a different number of
// shares than `num_parties`.
std::vector<std::vector<std::uint64_t>> smpc_party_fold(std::span<const Envelope> envelopes,
                                                        std::size_t num_parties);

// Sums the party totals, decodes and divides by the client count. Throws
// ProtocolError when the number of totals is not `num_parties`.
ParamVector smpc_recover(std::span<const std::vector<std::uint64_t>> party_totals, std::size_t num_parties,
                         std::size_t num_clients, const PrivacyConfig& cfg);

}  // namespace pfl::privacy
