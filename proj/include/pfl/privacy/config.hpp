#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pfl::privacy {

enum class MechanismKind { kNone, kDp, kHe, kSa, kSmpc };
enum class NoiseKind { kLaplace, kGaussian };

std::string_view mechanism_name(MechanismKind kind);
std::optional<MechanismKind> parse_mechanism(std::string_view name);
std::string_view noise_name(NoiseKind kind);
std::optional<NoiseKind> parse_noise(std::string_view name);

inline constexpr std::size_t kMinKeyBits = 256;

struct PrivacyConfig {
  MechanismKind mechanism = MechanismKind::kNone;

  // Differential privacy: per-round budget and the clipping bound that
  // serves as the update sensitivity.
  double epsilon = 1.0;
  double clip_norm = 1.0;
  NoiseKind noise = NoiseKind::kLaplace;
  double delta = 1e-5;  // gaussian only
  // Test hook: when set, replaces the calibrated noise scale.
  std::optional<double> forced_noise_scale;

  std::size_t key_bits = 1024;         // Paillier modulus size
  std::size_t scale_bits = 16;         // fixed-point fractional bits
  std::size_t num_parties = 3;         // SMPC compute parties
  double max_abs_value = 1048576.0;    // encoder range: |x| <= max_abs_value

  // Every violated invariant, one message each. Includes the overflow
  // guard N * 2^scale_bits * max_abs_value < q/2: q = 2^64 for SA/SMPC,
  // and for HE the smallest possible modulus 2^(key_bits - 1).
  std::vector<std::string> validate(std::size_t num_clients) const;
};

// Laplace scale b = S / epsilon.
double laplace_scale(const PrivacyConfig& cfg);
// Gaussian sigma = S * sqrt(2 ln(1.25 / delta)) / epsilon.
double gaussian_sigma(const PrivacyConfig& cfg);

}  // namespace pfl::privacy
