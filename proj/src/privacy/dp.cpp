#include "pfl/privacy/dp.hpp"

#include <cmath>
#include <string>

#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

namespace pfl::privacy {

double update_norm(const ParamVector& update, NoiseKind kind) {
  if (kind == NoiseKind::kGaussian) return std::sqrt(kernels::dot(update.span(), update.span()));
  double sum = 0.0;
  for (double v : update) sum += std::abs(v);
  return sum;
}

namespace {

// Extended-precision norm plus a bound on its summation error, so that
// `norm + slack <= S` implies the exact norm is at most S.
struct CheckedNorm {
  long double norm;
  long double slack;
};

CheckedNorm checked_norm(const ParamVector& v, NoiseKind kind) {
  long double sum = 0.0L;
  for (double x : v) {
    const long double y = x;
    sum += kind == NoiseKind::kGaussian ? y * y : std::fabs(y);
  }
  const long double rel = static_cast<long double>(v.size() + 4) * 0x1p-63L;
  if (kind == NoiseKind::kGaussian) return {std::sqrt(sum), std::sqrt(sum) * rel};
  return {sum, sum * rel};
}

}  // namespace

ParamVector clip_update(const ParamVector& update, double clip_norm, NoiseKind kind) {
  ParamVector out = update;
  const double norm = update_norm(update, kind);
  if (norm > clip_norm) {
    kernels::scale(clip_norm / norm, out.span());
    // Rounding in the rescale and in the norm can leave the result a few
    // ulps above the bound.
    const auto over = [&] {
      const auto c = checked_norm(out, kind);
      return c.norm + c.slack > clip_norm || update_norm(out, kind) > clip_norm;
    };
    while (over()) kernels::scale(1.0 - 0x1.0p-52, out.span());
  }
  return out;
}

Envelope dp_protect(const ParamVector& update, const PrivacyConfig& cfg, SeededRng& rng) {
  ParamVector noised = clip_update(update, cfg.clip_norm, cfg.noise);
  if (cfg.noise == NoiseKind::kLaplace) {
    const double b = laplace_scale(cfg);
    if (b > 0.0) {
      for (double& v : noised) v += rng.laplace(b);
    }
  } else {
    const double sigma = gaussian_sigma(cfg);
    if (sigma > 0.0) {
      for (double& v : noised) v += sigma * rng.normal();
    }
  }
  return Envelope(NoisedPayload{std::move(noised)});
}

ParamVector dp_aggregate(std::span<const Envelope> envelopes) {
  if (envelopes.empty()) throw InputError("dp_aggregate: no envelopes");
  const auto values_of = [](const Envelope& e) -> const ParamVector& {
    if (e.holds<NoisedPayload>()) return e.as<NoisedPayload>().values;
    if (e.holds<PlainPayload>()) return e.as<PlainPayload>().values;
    throw ProtocolError("dp_aggregate: envelope is neither noised nor plain");
  };
  const std::size_t dim = values_of(envelopes.front()).size();
  ParamVector sum(dim);
  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    const ParamVector& v = values_of(envelopes[i]);
    if (v.size() != dim) {
      throw InputError("dp_aggregate: envelope " + std::to_string(i) + " has dimension " + std::to_string(v.size()) +
                       ", expected " + std::to_string(dim));
    }
    kernels::add(v.span(), sum.span());
  }
  for (double& v : sum) v /= static_cast<double>(envelopes.size());
  return sum;
}

}  // namespace pfl::privacy
