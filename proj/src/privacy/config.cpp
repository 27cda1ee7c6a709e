#include "pfl/privacy/config.hpp"

#include <cmath>
#include <string>

namespace pfl::privacy {

std::string_view mechanism_name(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kNone:
      return "none";
    case MechanismKind::kDp:
      return "dp";
    case MechanismKind::kHe:
      return "he";
    case MechanismKind::kSa:
      return "sa";
    case MechanismKind::kSmpc:
      return "smpc";
  }
  return "unknown";
}

std::optional<MechanismKind> parse_mechanism(std::string_view name) {
  for (auto kind : {MechanismKind::kNone, MechanismKind::kDp, MechanismKind::kHe, MechanismKind::kSa,
                    MechanismKind::kSmpc}) {
    if (mechanism_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view noise_name(NoiseKind kind) { return kind == NoiseKind::kLaplace ? "laplace" : "gaussian"; }

std::optional<NoiseKind> parse_noise(std::string_view name) {
  if (name == "laplace") return NoiseKind::kLaplace;
  if (name == "gaussian") return NoiseKind::kGaussian;
  return std::nullopt;
}

std::vector<std::string> PrivacyConfig::validate(std::size_t num_clients) const {
  std::vector<std::string> errors;
  if (!(epsilon > 0.0)) errors.push_back("epsilon must be > 0");
  if (!(clip_norm > 0.0)) errors.push_back("clip norm must be > 0");
  if (noise == NoiseKind::kGaussian && !(delta > 0.0 && delta < 1.0)) {
    errors.push_back("delta must lie in (0, 1) for gaussian noise");
  }
  if (forced_noise_scale && !(*forced_noise_scale >= 0.0)) errors.push_back("forced noise scale must be >= 0");
  if (key_bits < kMinKeyBits) {
    errors.push_back("key bits must be >= " + std::to_string(kMinKeyBits) + " (got " + std::to_string(key_bits) + ")");
  }
  if (key_bits % 2 != 0) errors.push_back("key bits must be even");
  if (scale_bits < 1 || scale_bits > 52) errors.push_back("scale bits must lie in [1, 52]");
  if (num_parties < 2) errors.push_back("SMPC needs at least 2 parties");
  if (!(max_abs_value > 0.0)) errors.push_back("max abs value must be > 0");

  if ((mechanism == MechanismKind::kSa || mechanism == MechanismKind::kSmpc) && scale_bits <= 52 &&
      max_abs_value > 0.0) {
    const double bound = static_cast<double>(num_clients) * std::ldexp(max_abs_value, static_cast<int>(scale_bits));
    if (!(bound < std::ldexp(1.0, 63))) {
      errors.push_back("ring overflow guard violated: N * 2^scale_bits * max_abs_value must be < 2^63");
    }
  }
  if (mechanism == MechanismKind::kHe && key_bits >= kMinKeyBits && scale_bits <= 52 && max_abs_value > 0.0 &&
      num_clients > 0) {
    const double log_bound = std::log2(static_cast<double>(num_clients)) + static_cast<double>(scale_bits) +
                             std::log2(max_abs_value);
    if (!(log_bound < static_cast<double>(key_bits) - 2.0)) {
      errors.push_back("plaintext overflow guard violated: N * 2^scale_bits * max_abs_value must be < n/2");
    }
  }
  return errors;
}

double laplace_scale(const PrivacyConfig& cfg) {
  if (cfg.forced_noise_scale) return *cfg.forced_noise_scale;
  return cfg.clip_norm / cfg.epsilon;
}

double gaussian_sigma(const PrivacyConfig& cfg) {
  if (cfg.forced_noise_scale) return *cfg.forced_noise_scale;
  return cfg.clip_norm * std::sqrt(2.0 * std::log(1.25 / cfg.delta)) / cfg.epsilon;
}

}  // namespace pfl::privacy
