#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pfl/federation/client.hpp"

namespace pfl::federation {

// Adaptive personalized aggregation. Client i keeps a weight p_{i,j} for
// every client's core model and serves w_i = sum_j p_{i,j} c_j. The weights
// descend the local loss of w_i plus lambda * sum_j (p_{i,j} - delta_ij)^2.
// They are not normalized.

struct AppleSettings {
  double eta_p = 0.01;
  double lambda = 0.1;
};

// Throws ConfigError unless weights and cores both have N entries of equal
// length.
ParamVector apple_personalize(std::span<const double> weights, std::span<const ParamVector> core_models);
ParamVector apple_personalize(const ClientState& client, std::span<const ParamVector> core_models);

// d/dp_{i,j} of the objective at the client's current weights on the given
// rows: <grad_w L(w_i), c_j> + 2 lambda (p_{i,j} - delta_ij). The self index
// i is client.client_id.
std::vector<double> apple_weight_gradient(const ClientState& client, const ModelSpec& spec,
                                          std::span<const ParamVector> core_models, const Dataset& data,
                                          std::span<const std::size_t> rows, double lambda);

// The penalized objective, for checks and logging.
double apple_objective(const ClientState& client, const ModelSpec& spec, std::span<const ParamVector> core_models,
                       const Dataset& data, std::span<const std::size_t> rows, double lambda);

// Plain SGD on p_i over `epochs` shuffled passes of the client's train
// split. Returns the number of steps taken (0 for an empty shard).
std::size_t apple_update_weights(ClientState& client, const ModelSpec& spec, std::span<const ParamVector> core_models,
                                 std::size_t epochs, std::size_t batch_size, std::uint64_t round,
                                 const AppleSettings& settings);

}  // namespace pfl::federation
