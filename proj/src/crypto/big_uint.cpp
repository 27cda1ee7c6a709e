#include "pfl/crypto/big_uint.hpp"

#include <string>

#include "pfl/errors.hpp"

namespace pfl {

BigUint::BigUint() { mpz_init(value_); }

BigUint::BigUint(std::uint64_t value) {
  mpz_init(value_);
  mpz_import(value_, 1, 1, sizeof(value), 0, 0, &value);
}

BigUint::BigUint(const BigUint& other) { mpz_init_set(value_, other.value_); }

BigUint::BigUint(BigUint&& other) noexcept {
  mpz_init(value_);
  mpz_swap(value_, other.value_);
}

BigUint& BigUint::operator=(const BigUint& other) {
  if (this != &other) mpz_set(value_, other.value_);
  return *this;
}

BigUint& BigUint::operator=(BigUint&& other) noexcept {
  mpz_swap(value_, other.value_);
  return *this;
}

BigUint::~BigUint() { mpz_clear(value_); }

BigUint BigUint::from_string(std::string_view text) {
  int base = 10;
  if (text.starts_with("0x") || text.starts_with("0X")) {
    base = 16;
    text.remove_prefix(2);
  }
  const std::string owned(text);
  BigUint out;
  if (owned.empty() || owned.front() == '-' || mpz_set_str(out.value_, owned.c_str(), base) != 0) {
    throw InputError("BigUint: cannot parse '" + owned + "'");
  }
  return out;
}

BigUint BigUint::from_bytes_be(std::span<const std::uint8_t> bytes) {
  BigUint out;
  if (!bytes.empty()) mpz_import(out.value_, bytes.size(), 1, 1, 1, 0, bytes.data());
  return out;
}

BigUint BigUint::power_of_two(std::size_t exponent) {
  BigUint out;
  mpz_setbit(out.value_, exponent);
  return out;
}

bool BigUint::is_zero() const { return mpz_sgn(value_) == 0; }

bool BigUint::is_odd() const { return mpz_odd_p(value_) != 0; }

std::size_t BigUint::bit_length() const { return is_zero() ? 0 : mpz_sizeinbase(value_, 2); }

bool BigUint::test_bit(std::size_t index) const { return mpz_tstbit(value_, index) != 0; }

std::uint64_t BigUint::to_u64() const {
  if (bit_length() > 64) throw InputError("BigUint: value exceeds 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value_);
  return out;
}

std::vector<std::uint8_t> BigUint::to_bytes_be() const {
  std::vector<std::uint8_t> out((bit_length() + 7) / 8);
  if (!out.empty()) mpz_export(out.data(), nullptr, 1, 1, 1, 0, value_);
  return out;
}

std::string BigUint::to_string(int base) const {
  std::string out(mpz_sizeinbase(value_, base) + 2, '\0');
  mpz_get_str(out.data(), base, value_);
  out.resize(out.find('\0'));
  return out;
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
  mpz_add(value_, value_, rhs.value_);
  return *this;
}

BigUint& BigUint::operator-=(const BigUint& rhs) {
  if (mpz_cmp(value_, rhs.value_) < 0) throw InputError("BigUint: subtraction underflow");
  mpz_sub(value_, value_, rhs.value_);
  return *this;
}

BigUint& BigUint::operator*=(const BigUint& rhs) {
  mpz_mul(value_, value_, rhs.value_);
  return *this;
}

BigUint& BigUint::operator/=(const BigUint& rhs) {
  if (rhs.is_zero()) throw InputError("BigUint: division by zero");
  mpz_fdiv_q(value_, value_, rhs.value_);
  return *this;
}

BigUint& BigUint::operator%=(const BigUint& rhs) {
  if (rhs.is_zero()) throw InputError("BigUint: modulo by zero");
  mpz_fdiv_r(value_, value_, rhs.value_);
  return *this;
}

BigUint& BigUint::operator<<=(std::size_t bits) {
  mpz_mul_2exp(value_, value_, bits);
  return *this;
}

BigUint& BigUint::operator>>=(std::size_t bits) {
  mpz_fdiv_q_2exp(value_, value_, bits);
  return *this;
}

}  // namespace pfl
