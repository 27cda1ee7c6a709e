#include "pfl/privacy/mechanism.hpp"

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/privacy/dp.hpp"
#include "pfl/privacy/he.hpp"
#include "pfl/privacy/secure_agg.hpp"
#include "pfl/privacy/smpc.hpp"

namespace pfl::privacy {
namespace {

constexpr std::uint64_t kProtectStream = 0x50524f54;
constexpr std::uint64_t kKeygenStream = 0x4b455947;

SeededRng client_rng(std::uint64_t master_seed, const ClientContext& ctx) {
  return SeededRng(master_seed, stream_id({kProtectStream, ctx.round, ctx.client_id}));
}

class PlainMechanism final : public Mechanism {
 public:
  using Mechanism::Mechanism;

  Envelope protect(const ParamVector& update, const ClientContext&) const override {
    return Envelope(PlainPayload{update});
  }
  ParamVector aggregate(std::span<const Envelope> envelopes, std::uint64_t,
                        std::span<const std::uint64_t>) const override {
    return dp_aggregate(envelopes);
  }
};

class DpMechanism final : public Mechanism {
 public:
  using Mechanism::Mechanism;

  Envelope protect(const ParamVector& update, const ClientContext& ctx) const override {
    SeededRng rng = client_rng(master_seed(), ctx);
    return dp_protect(update, config(), rng);
  }
  ParamVector aggregate(std::span<const Envelope> envelopes, std::uint64_t,
                        std::span<const std::uint64_t>) const override {
    return dp_aggregate(envelopes);
  }
};

class HeMechanism final : public Mechanism {
 public:
  HeMechanism(PrivacyConfig cfg, std::uint64_t master_seed)
      : Mechanism(std::move(cfg), master_seed), authority_(make_authority(config().key_bits, master_seed)) {}

  Envelope protect(const ParamVector& update, const ClientContext& ctx) const override {
    SeededRng rng = client_rng(master_seed(), ctx);
    return he_protect(update, authority_.public_key(), config(), rng);
  }
  ParamVector aggregate(std::span<const Envelope> envelopes, std::uint64_t,
                        std::span<const std::uint64_t> roster) const override {
    if (envelopes.size() != roster.size()) throw ProtocolError("he: envelope count does not match the roster");
    const auto folded = he_aggregate(envelopes, authority_.public_key());
    return authority_.recover(folded, envelopes.size(), config());
  }

 private:
  static KeyAuthority make_authority(std::size_t key_bits, std::uint64_t master_seed) {
    SeededRng rng(master_seed, stream_id({kKeygenStream}));
    return KeyAuthority(key_bits, rng);
  }

  KeyAuthority authority_;
};

class SaMechanism final : public Mechanism {
 public:
  using Mechanism::Mechanism;

  Envelope protect(const ParamVector& update, const ClientContext& ctx) const override {
    return sa_protect(update, ctx.client_id, ctx.roster, ctx.round, master_seed(), config());
  }
  ParamVector aggregate(std::span<const Envelope> envelopes, std::uint64_t round,
                        std::span<const std::uint64_t> roster) const override {
    return sa_aggregate(envelopes, roster, round, config());
  }
};

class SmpcMechanism final : public Mechanism {
 public:
  using Mechanism::Mechanism;

  Envelope protect(const ParamVector& update, const ClientContext& ctx) const override {
    SeededRng rng = client_rng(master_seed(), ctx);
    return smpc_protect(update, config().num_parties, rng, config());
  }
  ParamVector aggregate(std::span<const Envelope> envelopes, std::uint64_t,
                        std::span<const std::uint64_t> roster) const override {
    if (envelopes.size() != roster.size()) throw ProtocolError("smpc: envelope count does not match the roster");
    const auto totals = smpc_party_fold(envelopes, config().num_parties);
    return smpc_recover(totals, config().num_parties, envelopes.size(), config());
  }
};

}  // namespace

std::unique_ptr<Mechanism> make_mechanism(const PrivacyConfig& cfg, std::size_t num_clients,
                                          std::uint64_t master_seed) {
  const auto errors = cfg.validate(num_clients);
  if (!errors.empty()) {
    std::string message = "invalid privacy configuration:";
    for (const auto& e : errors) message += "\n  - " + e;
    throw ConfigError(message);
  }
  switch (cfg.mechanism) {
    case MechanismKind::kNone:
      return std::make_unique<PlainMechanism>(cfg, master_seed);
    case MechanismKind::kDp:
      return std::make_unique<DpMechanism>(cfg, master_seed);
    case MechanismKind::kHe:
      return std::make_unique<HeMechanism>(cfg, master_seed);
    case MechanismKind::kSa:
      return std::make_unique<SaMechanism>(cfg, master_seed);
    case MechanismKind::kSmpc:
      return std::make_unique<SmpcMechanism>(cfg, master_seed);
  }
  throw ConfigError("unknown mechanism");
}

}  // namespace pfl::privacy
