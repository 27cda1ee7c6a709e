#include "pfl/privacy/smpc.hpp"

#include <string>

#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"
#include "pfl/privacy/fixed_point.hpp"

namespace pfl::privacy {

Envelope smpc_protect(const ParamVector& update, std::size_t num_parties, SeededRng& rng, const PrivacyConfig& cfg) {
  if (num_parties < 2) throw InputError("smpc_protect: need at least 2 parties");
  SharePayload payload;
  payload.shares.assign(num_parties, std::vector<std::uint64_t>(update.size()));
  auto& last = payload.shares.back();
  last = fp_encode_all(update.span(), cfg.scale_bits, cfg.max_abs_value);
  for (std::size_t p = 0; p + 1 < num_parties; ++p) {
    auto& share = payload.shares[p];
    for (std::uint64_t& v : share) v = rng.next_u64();
    kernels::ring_sub(share, last);
  }
  return Envelope(std::move(payload));
}

std::vector<std::vector<std::uint64_t>> smpc_party_fold(std::span<const Envelope> envelopes,
                                                        std::size_t num_parties) {
  if (envelopes.empty()) throw InputError("smpc_party_fold: no envelopes");
  std::vector<std::vector<std::uint64_t>> totals;
  for (std::size_t k = 0; k < envelopes.size(); ++k) {
    if (!envelopes[k].holds<SharePayload>()) throw ProtocolError("smpc_party_fold: envelope does not carry shares");
    const auto& shares = envelopes[k].as<SharePayload>().shares;
    if (shares.size() != num_parties) {
      throw ProtocolError("smpc_party_fold: envelope " + std::to_string(k) + " has " + std::to_string(shares.size()) +
                          " shares, expected " + std::to_string(num_parties));
    }
    if (totals.empty()) totals.assign(num_parties, std::vector<std::uint64_t>(shares.front().size(), 0));
    for (std::size_t p = 0; p < num_parties; ++p) {
      if (shares[p].size() != totals[p].size()) throw InputError("smpc_party_fold: ragged share dimensions");
      kernels::ring_add(shares[p], totals[p]);
    }
  }
  return totals;
}

ParamVector smpc_recover(std::span<const std::vector<std::uint64_t>> party_totals, std::size_t num_parties,
                         std::size_t num_clients, const PrivacyConfig& cfg) {
  if (party_totals.size() != num_parties) {
    throw ProtocolError("smpc_recover: got " + std::to_string(party_totals.size()) + " party totals, expected " +
                        std::to_string(num_parties));
  }
  if (num_clients == 0) throw InputError("smpc_recover: num_clients must be positive");
  std::vector<std::uint64_t> sum = party_totals.front();
  for (std::size_t p = 1; p < party_totals.size(); ++p) kernels::ring_add(party_totals[p], sum);
  return ParamVector(fp_decode_mean(sum, cfg.scale_bits, num_clients));
}

}  // namespace pfl::privacy
