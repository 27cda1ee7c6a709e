#pragma once

#include <cstdint>
#include <memory>
#include <span>

#include "pfl/model/param_vector.hpp"
#include "pfl/privacy/config.hpp"
#include "pfl/privacy/envelope.hpp"

namespace pfl::privacy {

struct ClientContext {
  std::uint64_t client_id = 0;
  std::uint64_t round = 0;
  std::span<const std::uint64_t> roster;
};

// One privacy layer between clients and the aggregator.
//
// protect() is the client stage and may run concurrently for different
// clients; its randomness comes from a stream keyed by (master seed, round,
// client id). aggregate() covers everything after upload until the mean
// update is known: server folding plus, where the protocol has them, the
// compute-party folds (SMPC) or the key authority's decryption (HE).
class Mechanism {
 public:
  explicit Mechanism(PrivacyConfig cfg, std::uint64_t master_seed) : cfg_(std::move(cfg)), master_seed_(master_seed) {}
  virtual ~Mechanism() = default;

  MechanismKind kind() const { return cfg_.mechanism; }
  const PrivacyConfig& config() const { return cfg_; }

  virtual Envelope protect(const ParamVector& update, const ClientContext& ctx) const = 0;
  // Mean of the protected updates, one envelope per roster member.
  virtual ParamVector aggregate(std::span<const Envelope> envelopes, std::uint64_t round,
                                std::span<const std::uint64_t> roster) const = 0;

 protected:
  std::uint64_t master_seed() const { return master_seed_; }

 private:
  PrivacyConfig cfg_;
  std::uint64_t master_seed_;
};

// Validates `cfg` for `num_clients` (ConfigError listing every violation)
// and builds the mechanism. HE generates its Paillier keys here.
std::unique_ptr<Mechanism> make_mechanism(const PrivacyConfig& cfg, std::size_t num_clients,
                                          std::uint64_t master_seed);

}  // namespace pfl::privacy
