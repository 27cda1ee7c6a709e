#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pfl/model/param_vector.hpp"
#include "pfl/privacy/config.hpp"
#include "pfl/privacy/envelope.hpp"

namespace pfl::privacy {

// Mask shared by clients {a, b}, drawn from a stream keyed by
// (master_seed, round, min(a,b), max(a,b)); both sides derive the same words.
std::vector<std::uint64_t> pairwise_mask(std::uint64_t master_seed, std::uint64_t round, std::uint64_t a,
                                         std::uint64_t b, std::size_t dim);

// Client i sends encode(u_i) + sum_{j > i} m_ij - sum_{j < i} m_ji over
// every other roster member j.
Envelope sa_protect(const ParamVector& update, std::uint64_t client_id, std::span<const std::uint64_t> roster,
                    std::uint64_t round, std::uint64_t master_seed, const PrivacyConfig& cfg);

// Ring sum of the masked vectors after checking that every roster member
// sent exactly one envelope for this round. Throws ProtocolError otherwise
// (dropout recovery is not supported).
std::vector<std::uint64_t> sa_masked_sum(std::span<const Envelope> envelopes, std::span<const std::uint64_t> roster,
                                         std::uint64_t round);

// Masked sum, decoded and divided by the roster size.
ParamVector sa_aggregate(std::span<const Envelope> envelopes, std::span<const std::uint64_t> roster,
                         std::uint64_t round, const PrivacyConfig& cfg);

}  // namespace pfl::privacy
