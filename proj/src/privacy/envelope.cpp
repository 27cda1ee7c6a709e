#include "pfl/privacy/envelope.hpp"

#include <bit>
#include <limits>
#include <string>

#include "pfl/errors.hpp"

namespace pfl::privacy {
namespace {

enum Tag : std::uint8_t { kPlain = 0, kNoised = 1, kCiphertexts = 2, kShares = 3, kMasked = 4 };

class Writer {
 public:
  explicit Writer(std::size_t reserve) { out_.reserve(reserve); }

  void u8(std::uint8_t v) { out_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }

  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t u8() { return need(1)[0]; }
  std::uint32_t u32() {
    const auto b = need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    const auto b = need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::span<const std::uint8_t> bytes(std::size_t n) { return need(n); }
  // Guards count fields against absurd allocations.
  std::size_t count(std::size_t element_size) {
    const std::uint64_t n = u64();
    if (element_size > 0 && n > remaining() / element_size) throw ParseError("envelope: count exceeds payload");
    return static_cast<std::size_t>(n);
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::span<const std::uint8_t> need(std::size_t n) {
    if (remaining() < n) throw ParseError("envelope: truncated payload");
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::size_t ciphertext_bytes(const BigUint& c) { return (c.bit_length() + 7) / 8; }

}  // namespace

std::size_t Envelope::dimension() const {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlainPayload> || std::is_same_v<T, NoisedPayload>) {
          return p.values.size();
        } else if constexpr (std::is_same_v<T, CiphertextPayload>) {
          return p.ciphertexts.size();
        } else if constexpr (std::is_same_v<T, SharePayload>) {
          return p.shares.empty() ? 0 : p.shares.front().size();
        } else {
          return p.values.size();
        }
      },
      payload_);
}

std::size_t Envelope::byte_size() const {
  return std::visit(
      [](const auto& p) -> std::size_t {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlainPayload> || std::is_same_v<T, NoisedPayload>) {
          return 1 + 8 + 8 * p.values.size();
        } else if constexpr (std::is_same_v<T, CiphertextPayload>) {
          std::size_t n = 1 + 8;
          for (const BigUint& c : p.ciphertexts) n += 4 + ciphertext_bytes(c);
          return n;
        } else if constexpr (std::is_same_v<T, SharePayload>) {
          std::size_t n = 1 + 8;
          for (const auto& party : p.shares) n += 8 + 8 * party.size();
          return n;
        } else {
          return 1 + 24 + 8 * p.values.size();
        }
      },
      payload_);
}

std::vector<std::uint8_t> Envelope::serialize() const {
  Writer w(byte_size());
  std::visit(
      [&w](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PlainPayload> || std::is_same_v<T, NoisedPayload>) {
          w.u8(std::is_same_v<T, PlainPayload> ? kPlain : kNoised);
          w.u64(p.values.size());
          for (double v : p.values) w.f64(v);
        } else if constexpr (std::is_same_v<T, CiphertextPayload>) {
          w.u8(kCiphertexts);
          w.u64(p.ciphertexts.size());
          for (const BigUint& c : p.ciphertexts) {
            const auto bytes = c.to_bytes_be();
            w.u32(static_cast<std::uint32_t>(bytes.size()));
            w.bytes(bytes);
          }
        } else if constexpr (std::is_same_v<T, SharePayload>) {
          w.u8(kShares);
          w.u64(p.shares.size());
          for (const auto& party : p.shares) {
            w.u64(party.size());
            for (std::uint64_t v : party) w.u64(v);
          }
        } else {
          w.u8(kMasked);
          w.u64(p.client_id);
          w.u64(p.round);
          w.u64(p.values.size());
          for (std::uint64_t v : p.values) w.u64(v);
        }
      },
      payload_);
  return w.take();
}

Envelope Envelope::deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Envelope out;
  switch (r.u8()) {
    case kPlain:
    case kNoised: {
      const bool plain = bytes[0] == kPlain;
      std::vector<double> values(r.count(8));
      for (double& v : values) v = r.f64();
      if (plain) {
        out = Envelope(PlainPayload{ParamVector(std::move(values))});
      } else {
        out = Envelope(NoisedPayload{ParamVector(std::move(values))});
      }
      break;
    }
    case kCiphertexts: {
      CiphertextPayload p;
      p.ciphertexts.resize(r.count(4));
      for (BigUint& c : p.ciphertexts) {
        const std::uint32_t len = r.u32();
        c = BigUint::from_bytes_be(r.bytes(len));
      }
      out = Envelope(std::move(p));
      break;
    }
    case kShares: {
      SharePayload p;
      p.shares.resize(r.count(8));
      for (auto& party : p.shares) {
        party.resize(r.count(8));
        for (std::uint64_t& v : party) v = r.u64();
      }
      out = Envelope(std::move(p));
      break;
    }
    case kMasked: {
      MaskedPayload p;
      p.client_id = r.u64();
      p.round = r.u64();
      p.values.resize(r.count(8));
      for (std::uint64_t& v : p.values) v = r.u64();
      out = Envelope(std::move(p));
      break;
    }
    default:
      throw ParseError("envelope: unknown payload tag " + std::to_string(bytes[0]));
  }
  if (r.remaining() != 0) throw ParseError("envelope: trailing bytes");
  return out;
}

bool operator==(const Envelope& a, const Envelope& b) { return a.serialize() == b.serialize(); }

}  // namespace pfl::privacy
