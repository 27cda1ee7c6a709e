#pragma once

#include <gmp.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pfl {

// Arbitrary-precision non-negative integer with value semantics.
//
// Backed by a GMP mpz_t. Operations that would produce a negative value
// (a - b with b > a) throw InputError instead of wrapping.
class BigUint {
 public:
  BigUint();
  BigUint(std::uint64_t value);  // NOLINT(google-explicit-constructor)
  BigUint(const BigUint& other);
  BigUint(BigUint&& other) noexcept;
  BigUint& operator=(const BigUint& other);
  BigUint& operator=(BigUint&& other) noexcept;
  ~BigUint();

  // Decimal, or hex with a 0x prefix.
  static BigUint from_string(std::string_view text);
  static BigUint from_bytes_be(std::span<const std::uint8_t> bytes);
  static BigUint power_of_two(std::size_t exponent);

  bool is_zero() const;
  bool is_odd() const;
  std::size_t bit_length() const;
  bool test_bit(std::size_t index) const;
  // Throws InputError when the value does not fit in 64 bits.
  std::uint64_t to_u64() const;
  // Minimal big-endian encoding; zero encodes as an empty string.
  std::vector<std::uint8_t> to_bytes_be() const;
  std::string to_string(int base = 10) const;

  BigUint& operator+=(const BigUint& rhs);
  BigUint& operator-=(const BigUint& rhs);
  BigUint& operator*=(const BigUint& rhs);
  BigUint& operator/=(const BigUint& rhs);
  BigUint& operator%=(const BigUint& rhs);
  BigUint& operator<<=(std::size_t bits);
  BigUint& operator>>=(std::size_t bits);

  friend BigUint operator+(BigUint lhs, const BigUint& rhs) { return lhs += rhs; }
  friend BigUint operator-(BigUint lhs, const BigUint& rhs) { return lhs -= rhs; }
  friend BigUint operator*(BigUint lhs, const BigUint& rhs) { return lhs *= rhs; }
  friend BigUint operator/(BigUint lhs, const BigUint& rhs) { return lhs /= rhs; }
  friend BigUint operator%(BigUint lhs, const BigUint& rhs) { return lhs %= rhs; }
  friend BigUint operator<<(BigUint lhs, std::size_t bits) { return lhs <<= bits; }
  friend BigUint operator>>(BigUint lhs, std::size_t bits) { return lhs >>= bits; }

  friend bool operator==(const BigUint& a, const BigUint& b) { return mpz_cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
    const int c = mpz_cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  mpz_srcptr raw() const { return value_; }
  mpz_ptr raw() { return value_; }

 private:
  mpz_t value_;
};

}  // namespace pfl
