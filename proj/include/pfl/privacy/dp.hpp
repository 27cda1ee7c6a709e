#pragma once

#include <span>

#include "pfl/crypto/rng.hpp"
#include "pfl/model/param_vector.hpp"
#include "pfl/privacy/config.hpp"
#include "pfl/privacy/envelope.hpp"

namespace pfl::privacy {

// L1 norm for laplace noise, L2 for gaussian.
double update_norm(const ParamVector& update, NoiseKind kind);

// Scales the update by min(1, S / ||u||).
ParamVector clip_update(const ParamVector& update, double clip_norm, NoiseKind kind);

// Clip, then add i.i.d. per-coordinate noise: Laplace(S / epsilon) or
// N(0, sigma^2) with sigma = S sqrt(2 ln(1.25 / delta)) / epsilon.
Envelope dp_protect(const ParamVector& update, const PrivacyConfig& cfg, SeededRng& rng);

// Arithmetic mean of noised (or plain) envelopes.
ParamVector dp_aggregate(std::span<const Envelope> envelopes);

}  // namespace pfl::privacy
