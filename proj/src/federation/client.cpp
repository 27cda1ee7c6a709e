#include "pfl/federation/client.hpp"

#include <algorithm>
#include <numeric>

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"

namespace pfl::federation {

std::vector<std::vector<std::size_t>> epoch_batches(std::size_t rows, std::size_t batch_size, std::uint64_t seed,
                                                    std::uint64_t round, std::uint64_t epoch) {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), 0);
  SeededRng rng(seed, stream_id({0x42415443, round, epoch}));
  rng.shuffle(std::span(order));
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t begin = 0; begin < rows; begin += batch_size) {
    const std::size_t end = std::min(rows, begin + batch_size);
    batches.emplace_back(order.begin() + begin, order.begin() + end);
  }
  return batches;
}

LocalTrainResult local_train(ClientState& client, const ModelSpec& spec, const ParamVector& start_model,
                             std::size_t epochs, std::size_t batch_size, std::uint64_t round) {
  LocalTrainResult out;
  out.model = start_model;
  if (client.train.empty()) {
    out.empty_shard = true;
    return out;
  }
  double loss_sum = 0.0;
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    for (const auto& batch : epoch_batches(client.train.size(), batch_size, client.rng_seed, round, epoch)) {
      auto step = loss_and_gradient(spec, out.model, client.train, batch);
      optimizer_step(client.optimizer, out.model, step.gradient);
      loss_sum += step.loss;
      ++out.steps;
    }
  }
  if (out.steps > 0) out.mean_loss = loss_sum / static_cast<double>(out.steps);
  return out;
}

}  // namespace pfl::federation
