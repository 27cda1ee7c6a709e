#include "pfl/privacy/fixed_point.hpp"

#include <cmath>
#include <string>

#include "pfl/errors.hpp"

namespace pfl::privacy {
namespace {

double scaled(double x, std::size_t scale_bits) {
  if (!std::isfinite(x)) throw EncodeOverflowError("fp_encode: non-finite value");
  return std::round(std::ldexp(x, static_cast<int>(scale_bits)));
}

}  // namespace

std::uint64_t fp_encode(double x, std::size_t scale_bits) {
  const double v = scaled(x, scale_bits);
  if (!(std::abs(v) < 0x1.0p63)) {
    throw EncodeOverflowError("fp_encode: |x| * 2^" + std::to_string(scale_bits) + " exceeds the ring half-range");
  }
  return static_cast<std::uint64_t>(static_cast<std::int64_t>(v));
}

double fp_decode(std::uint64_t v, std::size_t scale_bits) {
  return std::ldexp(static_cast<double>(static_cast<std::int64_t>(v)), -static_cast<int>(scale_bits));
}

BigUint fp_encode(double x, std::size_t scale_bits, const BigUint& modulus) {
  const double v = scaled(x, scale_bits);
  BigUint magnitude;
  mpz_set_d(magnitude.raw(), std::abs(v));
  // |v| < modulus / 2  <=>  2|v| < modulus
  if (!(magnitude + magnitude < modulus)) {
    throw EncodeOverflowError("fp_encode: |x| * 2^" + std::to_string(scale_bits) + " exceeds modulus / 2");
  }
  if (v < 0 && !magnitude.is_zero()) return modulus - magnitude;
  return magnitude;
}

double fp_decode(const BigUint& v, std::size_t scale_bits, const BigUint& modulus) {
  const bool negative = !(v + v < modulus);
  const BigUint magnitude = negative ? modulus - v : v;
  const double m = mpz_get_d(magnitude.raw());
  return std::ldexp(negative ? -m : m, -static_cast<int>(scale_bits));
}

std::vector<std::uint64_t> fp_encode_all(std::span<const double> xs, std::size_t scale_bits, double max_abs) {
  std::vector<std::uint64_t> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(std::abs(xs[i]) <= max_abs)) {
      throw EncodeOverflowError("coordinate " + std::to_string(i) + " = " + std::to_string(xs[i]) +
                                " exceeds the encoder range " + std::to_string(max_abs));
    }
    out[i] = fp_encode(xs[i], scale_bits);
  }
  return out;
}

std::vector<double> fp_decode_mean(std::span<const std::uint64_t> sum, std::size_t scale_bits, std::size_t count) {
  std::vector<double> out(sum.size());
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t i = 0; i < sum.size(); ++i) out[i] = fp_decode(sum[i], scale_bits) * inv;
  return out;
}

}  // namespace pfl::privacy
