#include "pfl/privacy/secure_agg.hpp"

#include <algorithm>
#include <string>

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"
#include "pfl/privacy/fixed_point.hpp"

namespace pfl::privacy {
namespace {

constexpr std::uint64_t kMaskStream = 0x4d41534b;

}  // namespace

std::vector<std::uint64_t> pairwise_mask(std::uint64_t master_seed, std::uint64_t round, std::uint64_t a,
                                         std::uint64_t b, std::size_t dim) {
  SeededRng rng(master_seed, stream_id({kMaskStream, round, std::min(a, b), std::max(a, b)}));
  std::vector<std::uint64_t> mask(dim);
  for (std::uint64_t& m : mask) m = rng.next_u64();
  return mask;
}

Envelope sa_protect(const ParamVector& update, std::uint64_t client_id, std::span<const std::uint64_t> roster,
                    std::uint64_t round, std::uint64_t master_seed, const PrivacyConfig& cfg) {
  if (std::find(roster.begin(), roster.end(), client_id) == roster.end()) {
    throw ProtocolError("sa_protect: client " + std::to_string(client_id) + " is not on the roster");
  }
  MaskedPayload payload;
  payload.client_id = client_id;
  payload.round = round;
  payload.values = fp_encode_all(update.span(), cfg.scale_bits, cfg.max_abs_value);
  for (std::uint64_t other : roster) {
    if (other == client_id) continue;
    const auto mask = pairwise_mask(master_seed, round, client_id, other, update.size());
    if (client_id < other) {
      kernels::ring_add(mask, payload.values);
    } else {
      kernels::ring_sub(mask, payload.values);
    }
  }
  return Envelope(std::move(payload));
}

std::vector<std::uint64_t> sa_masked_sum(std::span<const Envelope> envelopes, std::span<const std::uint64_t> roster,
                                         std::uint64_t round) {
  if (roster.empty()) throw ProtocolError("sa_aggregate: empty roster");
  std::vector<const MaskedPayload*> by_member(roster.size(), nullptr);
  for (const Envelope& e : envelopes) {
    if (!e.holds<MaskedPayload>()) throw ProtocolError("sa_aggregate: envelope is not masked");
    const auto& p = e.as<MaskedPayload>();
    if (p.round != round) {
      throw ProtocolError("sa_aggregate: envelope from client " + std::to_string(p.client_id) + " is for round " +
                          std::to_string(p.round) + ", expected " + std::to_string(round));
    }
    const auto it = std::find(roster.begin(), roster.end(), p.client_id);
    if (it == roster.end()) {
      throw ProtocolError("sa_aggregate: client " + std::to_string(p.client_id) + " is not on the roster");
    }
    const auto slot = static_cast<std::size_t>(it - roster.begin());
    if (by_member[slot]) throw ProtocolError("sa_aggregate: duplicate envelope from client " + std::to_string(p.client_id));
    by_member[slot] = &p;
  }
  for (std::size_t k = 0; k < roster.size(); ++k) {
    if (!by_member[k]) {
      throw ProtocolError("sa_aggregate: roster member " + std::to_string(roster[k]) +
                          " is missing (dropout recovery unsupported)");
    }
  }

  const std::size_t dim = by_member.front()->values.size();
  std::vector<std::uint64_t> sum(dim, 0);
  for (const MaskedPayload* p : by_member) {
    if (p->values.size() != dim) throw InputError("sa_aggregate: ragged envelope dimensions");
    kernels::ring_add(p->values, sum);
  }
  return sum;
}

ParamVector sa_aggregate(std::span<const Envelope> envelopes, std::span<const std::uint64_t> roster,
                         std::uint64_t round, const PrivacyConfig& cfg) {
  const auto sum = sa_masked_sum(envelopes, roster, round);
  return ParamVector(fp_decode_mean(sum, cfg.scale_bits, roster.size()));
}

}  // namespace pfl::privacy
