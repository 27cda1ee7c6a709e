#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "pfl/crypto/big_uint.hpp"
#include "pfl/model/param_vector.hpp"

namespace pfl::privacy {

struct PlainPayload {
  ParamVector values;
};

struct NoisedPayload {
  ParamVector values;
};

// One Paillier ciphertext per coordinate.
struct CiphertextPayload {
  std::vector<BigUint> ciphertexts;
};

// shares[p][i]: party p's additive share of coordinate i, in Z/2^64.
struct SharePayload {
  std::vector<std::vector<std::uint64_t>> shares;
};

// Pairwise-masked encoding; the sender and round let the server check the
// roster.
struct MaskedPayload {
  std::uint64_t client_id = 0;
  std::uint64_t round = 0;
  std::vector<std::uint64_t> values;
};

// On-the-wire form of one client update.
//
// Wire format (all integers little-endian):
//   u8 tag: 0 plain, 1 noised, 2 ciphertexts, 3 shares, 4 masked
//   plain / noised: u64 count, count x f64
//   ciphertexts:    u64 count, then per ciphertext u32 length + big-endian
//                   magnitude bytes (minimal; zero is empty)
//   shares:         u64 parties, then per party u64 count, count x u64
//   masked:         u64 client_id, u64 round, u64 count, count x u64
class Envelope {
 public:
  using Payload = std::variant<PlainPayload, NoisedPayload, CiphertextPayload, SharePayload, MaskedPayload>;

  Envelope() = default;
  explicit Envelope(Payload payload) : payload_(std::move(payload)) {}

  const Payload& payload() const { return payload_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(payload_);
  }
  template <typename T>
  bool holds() const {
    return std::holds_alternative<T>(payload_);
  }

  // Number of coordinates carried.
  std::size_t dimension() const;
  // Exactly serialize().size(), computed without serializing.
  std::size_t byte_size() const;
  std::vector<std::uint8_t> serialize() const;
  // Throws ParseError on truncated or malformed input.
  static Envelope deserialize(std::span<const std::uint8_t> bytes);

 private:
  Payload payload_;
};

bool operator==(const Envelope& a, const Envelope& b);

}  // namespace pfl::privacy
