#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pfl/federation/apple.hpp"
#include "pfl/federation/client.hpp"
#include "pfl/metrics/metrics.hpp"
#include "pfl/model/dataset.hpp"
#include "pfl/model/model.hpp"
#include "pfl/model/optimizer.hpp"
#include "pfl/privacy/config.hpp"
#include "pfl/privacy/mechanism.hpp"

namespace pfl::federation {

enum class AggregationMode { kFedAvg, kApple };
std::string_view aggregation_name(AggregationMode mode);
std::optional<AggregationMode> parse_aggregation(std::string_view name);

struct DatasetSource {
  bool synthetic = true;
  SyntheticSpec spec;
  std::string csv_path;
};

struct ExperimentConfig {
  std::size_t num_clients = 16;
  std::size_t rounds = 50;
  std::size_t local_epochs = 1;
  std::size_t batch_size = 32;
  ModelKind model = ModelKind::kLogistic;
  std::size_t hidden_dim = 32;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double learning_rate = 0.001;
  DatasetSource dataset;
  double alpha = 0.5;
  AggregationMode aggregation = AggregationMode::kFedAvg;
  AppleSettings apple;
  // Scale each update by N * n_i / sum(n) so the mean becomes the
  // sample-weighted mean.
  bool weighted = false;
  privacy::PrivacyConfig privacy;
  std::uint64_t seed = 1;
  std::size_t eval_interval = 1;
  std::size_t threads = 1;
  std::string output_dir = "results";

  // Every violated invariant, one message each.
  std::vector<std::string> validate() const;
};

struct RoundRecord {
  std::size_t round = 0;  // 1-based
  bool evaluated = false;
  double global_acc = 0.0;
  double global_prec = 0.0;
  double global_rec = 0.0;
  double global_f1 = 0.0;
  double mean_personal_acc = 0.0;
  double mean_loss = 0.0;
  double server_ms = 0.0;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
};

struct ServerState {
  ParamVector global_model;
  std::size_t round_index = 0;
  std::vector<std::uint64_t> roster;
};

struct RoundSettings {
  ModelSpec spec;
  AggregationMode aggregation = AggregationMode::kFedAvg;
  std::size_t local_epochs = 1;
  std::size_t batch_size = 32;
  AppleSettings apple;
  bool weighted = false;
  std::size_t threads = 1;
};

// One synchronous round over all clients. Clients may train concurrently;
// their envelopes are handed to the mechanism in ascending id order.
// Fills the training and traffic fields of the record; evaluation is left
// to the caller. Mechanism failures surface as MechanismError.
RoundRecord run_round(ServerState& server, std::vector<ClientState>& clients, const privacy::Mechanism& mechanism,
                      const RoundSettings& settings);

struct Evaluation {
  metrics::Summary global;
  double mean_personal_acc = 0.0;
};

// Global model on the union of client test splits; personalized (APPLE) or
// global (FedAvg) model on each client's own test split, averaged over the
// clients that have test rows.
Evaluation evaluate(const ServerState& server, const std::vector<ClientState>& clients, const ModelSpec& spec,
                    AggregationMode aggregation);

Dataset load_dataset(const DatasetSource& source, std::uint64_t seed);

class Federation {
 public:
  // Throws ConfigError listing every violation before doing any work.
  explicit Federation(const ExperimentConfig& config);
  Federation(const ExperimentConfig& config, const Dataset& data);

  RoundRecord step();
  Evaluation evaluate() const;

  const ExperimentConfig& config() const { return config_; }
  const ModelSpec& model_spec() const { return settings_.spec; }
  const ServerState& server() const { return server_; }
  const std::vector<ClientState>& clients() const { return clients_; }
  const privacy::Mechanism& mechanism() const { return *mechanism_; }

 private:
  ExperimentConfig config_;
  RoundSettings settings_;
  ServerState server_;
  std::vector<ClientState> clients_;
  std::unique_ptr<privacy::Mechanism> mechanism_;
};

// All R rounds; evaluated rounds carry metrics.
std::vector<RoundRecord> run_experiment(const ExperimentConfig& config);

}  // namespace pfl::federation
