#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pfl/crypto/big_uint.hpp"

namespace pfl::privacy {

// Fixed-point codec between reals and a modular integer domain.
//
// x maps to round(x * 2^scale_bits) in centered form: negatives become
// modulus - |v|. Decoding treats values >= modulus/2 as negative. Encoding
// throws EncodeOverflowError unless |round(x * 2^scale_bits)| < modulus/2.

// Ring Z/2^64.
std::uint64_t fp_encode(double x, std::size_t scale_bits);
double fp_decode(std::uint64_t v, std::size_t scale_bits);

// Arbitrary modulus (Paillier plaintext space Z_n).
BigUint fp_encode(double x, std::size_t scale_bits, const BigUint& modulus);
double fp_decode(const BigUint& v, std::size_t scale_bits, const BigUint& modulus);

// Vector encoder that also enforces the configured range |x| <= max_abs.
// The error message names the offending coordinate.
std::vector<std::uint64_t> fp_encode_all(std::span<const double> xs, std::size_t scale_bits, double max_abs);

// Decodes a ring sum of `count` encoded vectors and divides by count.
std::vector<double> fp_decode_mean(std::span<const std::uint64_t> sum, std::size_t scale_bits, std::size_t count);

}  // namespace pfl::privacy
