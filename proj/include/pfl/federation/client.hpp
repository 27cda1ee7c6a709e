#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pfl/model/dataset.hpp"
#include "pfl/model/model.hpp"
#include "pfl/model/optimizer.hpp"
#include "pfl/model/param_vector.hpp"

namespace pfl::federation {

struct ClientState {
  std::uint64_t client_id = 0;
  Dataset train;
  Dataset test;
  // The shareable core model c_i.
  ParamVector core_model;
  // APPLE combination weights p_i over all N core models.
  std::vector<double> personal_weights;
  OptimizerState optimizer;
  std::uint64_t rng_seed = 0;
};

struct LocalTrainResult {
  ParamVector model;
  double mean_loss = 0.0;  // over the minibatches of this call
  std::size_t steps = 0;
  bool empty_shard = false;  // nothing to train on; model == start
};

// Minibatch training from `start_model` on the client's train split. Batch
// order is drawn from a stream keyed by (rng_seed, round, epoch), so equal
// inputs give bit-identical results. Advances the client's optimizer.
LocalTrainResult local_train(ClientState& client, const ModelSpec& spec, const ParamVector& start_model,
                             std::size_t epochs, std::size_t batch_size, std::uint64_t round);

// Shuffled minibatch row lists for one epoch.
std::vector<std::vector<std::size_t>> epoch_batches(std::size_t rows, std::size_t batch_size, std::uint64_t seed,
                                                    std::uint64_t round, std::uint64_t epoch);

}  // namespace pfl::federation
