#include "pfl/federation/apple.hpp"

#include <string>

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

namespace pfl::federation {
namespace {

constexpr std::uint64_t kAppleStream = 0x4150504c;

void check_cores(std::size_t num_weights, std::span<const ParamVector> cores) {
  if (cores.size() != num_weights) {
    throw ConfigError("apple: " + std::to_string(num_weights) + " weights but " + std::to_string(cores.size()) +
                      " core models");
  }
  if (cores.empty()) throw ConfigError("apple: no core models");
  for (const auto& c : cores) {
    if (c.size() != cores.front().size()) throw ConfigError("apple: core models differ in length");
  }
}

std::size_t self_index(const ClientState& client, std::size_t n) {
  if (client.client_id >= n) throw ConfigError("apple: client id outside the core model list");
  return static_cast<std::size_t>(client.client_id);
}

}  // namespace

ParamVector apple_personalize(std::span<const double> weights, std::span<const ParamVector> core_models) {
  check_cores(weights.size(), core_models);
  ParamVector out(core_models.front().size());
  for (std::size_t j = 0; j < core_models.size(); ++j) kernels::axpy(weights[j], core_models[j].span(), out.span());
  return out;
}

ParamVector apple_personalize(const ClientState& client, std::span<const ParamVector> core_models) {
  return apple_personalize(client.personal_weights, core_models);
}

std::vector<double> apple_weight_gradient(const ClientState& client, const ModelSpec& spec,
                                          std::span<const ParamVector> core_models, const Dataset& data,
                                          std::span<const std::size_t> rows, double lambda) {
  const ParamVector w = apple_personalize(client, core_models);
  const std::size_t self = self_index(client, core_models.size());
  const auto lg = loss_and_gradient(spec, w, data, rows);
  std::vector<double> grad(core_models.size());
  for (std::size_t j = 0; j < core_models.size(); ++j) {
    const double target = j == self ? 1.0 : 0.0;
    grad[j] = kernels::dot(lg.gradient.span(), core_models[j].span()) +
              2.0 * lambda * (client.personal_weights[j] - target);
  }
  return grad;
}

double apple_objective(const ClientState& client, const ModelSpec& spec, std::span<const ParamVector> core_models,
                       const Dataset& data, std::span<const std::size_t> rows, double lambda) {
  const ParamVector w = apple_personalize(client, core_models);
  const std::size_t self = self_index(client, core_models.size());
  double penalty = 0.0;
  for (std::size_t j = 0; j < core_models.size(); ++j) {
    const double d = client.personal_weights[j] - (j == self ? 1.0 : 0.0);
    penalty += d * d;
  }
  return loss_and_gradient(spec, w, data, rows).loss + lambda * penalty;
}

std::size_t apple_update_weights(ClientState& client, const ModelSpec& spec, std::span<const ParamVector> core_models,
                                 std::size_t epochs, std::size_t batch_size, std::uint64_t round,
                                 const AppleSettings& settings) {
  check_cores(client.personal_weights.size(), core_models);
  if (client.train.empty()) return 0;
  const std::uint64_t seed = stream_id({client.rng_seed, kAppleStream});
  std::size_t steps = 0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& batch : epoch_batches(client.train.size(), batch_size, seed, round, epoch)) {
      const auto grad = apple_weight_gradient(client, spec, core_models, client.train, batch, settings.lambda);
      for (std::size_t j = 0; j < grad.size(); ++j) client.personal_weights[j] -= settings.eta_p * grad[j];
      ++steps;
    }
  }
  return steps;
}

}  // namespace pfl::federation
