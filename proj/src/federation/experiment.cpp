#include "pfl/federation/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"
#include "pfl/privacy/envelope.hpp"

namespace pfl::federation {
namespace {

enum StreamTag : std::uint64_t {
  kDataStream = 0x44415441,
  kPartitionStream,
  kSplitStream,
  kClientStream,
  kInitStream,
};

constexpr double kTestFraction = 0.2;

// Runs fn(i) for i in [0, n) on up to `threads` workers. The first failure
// by client index is rethrown after all workers finish.
template <typename Fn>
void for_each_client(std::size_t n, std::size_t threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::uint64_t plain_bytes(std::size_t dim) {
  return privacy::Envelope(privacy::PlainPayload{ParamVector(dim)}).byte_size();
}

double accuracy_of(const ModelSpec& spec, const ParamVector& params, const Dataset& data) {
  const auto pred = predict(spec, params, data.features);
  return metrics::accuracy(metrics::confusion(pred, data.labels, data.num_classes));
}

}  // namespace

std::string_view aggregation_name(AggregationMode mode) {
  return mode == AggregationMode::kApple ? "apple" : "fedavg";
}

std::optional<AggregationMode> parse_aggregation(std::string_view name) {
  if (name == "fedavg") return AggregationMode::kFedAvg;
  if (name == "apple") return AggregationMode::kApple;
  return std::nullopt;
}

std::vector<std::string> ExperimentConfig::validate() const {
  std::vector<std::string> errors;
  if (num_clients < 1) errors.push_back("clients must be >= 1");
  if (local_epochs < 1) errors.push_back("epochs must be >= 1");
  if (batch_size < 1) errors.push_back("batch-size must be >= 1");
  if (model == ModelKind::kMlp && hidden_dim < 1) errors.push_back("hidden-dim must be >= 1 for the mlp model");
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) errors.push_back("lr must be a positive number");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) errors.push_back("alpha must be a positive number");
  if (!(apple.eta_p > 0.0) || !std::isfinite(apple.eta_p)) errors.push_back("eta-p must be a positive number");
  if (!(apple.lambda >= 0.0) || !std::isfinite(apple.lambda)) errors.push_back("lambda must be >= 0");
  if (eval_interval < 1) errors.push_back("eval-every must be >= 1");
  if (threads < 1) errors.push_back("threads must be >= 1");
  if (dataset.synthetic) {
    if (dataset.spec.num_examples < 1) errors.push_back("synthetic-examples must be >= 1");
    if (dataset.spec.input_dim < 1) errors.push_back("input-dim must be >= 1");
    if (dataset.spec.num_classes < 2) errors.push_back("classes must be >= 2");
    if (!(dataset.spec.class_separation >= 0.0) || !std::isfinite(dataset.spec.class_separation)) {
      errors.push_back("class-sep must be >= 0");
    }
  } else if (dataset.csv_path.empty()) {
    errors.push_back("csv dataset path is empty");
  }
  if (num_clients >= 1) {
    for (auto& e : privacy.validate(num_clients)) errors.push_back(std::move(e));
  }
  return errors;
}

RoundRecord run_round(ServerState& server, std::vector<ClientState>& clients, const privacy::Mechanism& mechanism,
                      const RoundSettings& settings) {
  const std::size_t n = clients.size();
  if (n == 0) throw ConfigError("run_round: no clients");
  if (server.roster.size() != n) throw ConfigError("run_round: roster does not match the client list");
  const std::size_t dim = server.global_model.size();
  for (const auto& c : clients) {
    if (c.core_model.size() != dim) throw ConfigError("run_round: core model dimension mismatch");
  }
  const bool apple = settings.aggregation == AggregationMode::kApple;
  const std::uint64_t round = server.round_index + 1;

  // Cross-silo broadcast of the round-start core models.
  std::vector<ParamVector> snapshot;
  if (apple) {
    snapshot.reserve(n);
    for (const auto& c : clients) snapshot.push_back(c.core_model);
  }

  double total_samples = 0.0;
  for (const auto& c : clients) total_samples += static_cast<double>(c.train.size());

  std::vector<privacy::Envelope> envelopes(n);
  std::vector<LocalTrainResult> results(n);
  for_each_client(n, settings.threads, [&](std::size_t i) {
    ClientState& client = clients[i];
    const ParamVector& start = apple ? snapshot[i] : server.global_model;
    results[i] = local_train(client, settings.spec, start, settings.local_epochs, settings.batch_size, round);
    client.core_model = results[i].model;
    if (apple) {
      std::vector<ParamVector> cores = snapshot;
      cores[i] = client.core_model;
      apple_update_weights(client, settings.spec, cores, settings.local_epochs, settings.batch_size, round,
                           settings.apple);
    }
    ParamVector update = client.core_model;
    kernels::axpy(-1.0, start.span(), update.span());
    if (settings.weighted) {
      const double w = total_samples > 0.0
                           ? static_cast<double>(n) * static_cast<double>(client.train.size()) / total_samples
                           : 0.0;
      kernels::scale(w, update.span());
    }
    const privacy::ClientContext ctx{server.roster[i], round, server.roster};
    try {
      envelopes[i] = mechanism.protect(update, ctx);
    } catch (const std::exception& e) {
      throw MechanismError("protect", static_cast<long>(server.roster[i]), e.what());
    }
  });

  RoundRecord rec;
  rec.round = round;
  for (const auto& env : envelopes) rec.bytes_up += env.byte_size();
  rec.bytes_down = plain_bytes(dim) * (apple ? n * (n - 1) : n);

  std::size_t trained = 0;
  double loss_sum = 0.0;
  for (const auto& r : results) {
    if (r.steps == 0) continue;
    loss_sum += r.mean_loss;
    ++trained;
  }
  rec.mean_loss = trained > 0 ? loss_sum / static_cast<double>(trained) : 0.0;

  const auto t0 = std::chrono::steady_clock::now();
  ParamVector mean_update;
  try {
    mean_update = mechanism.aggregate(envelopes, round, server.roster);
  } catch (const std::exception& e) {
    throw MechanismError("aggregate", -1, e.what());
  }
  if (mean_update.size() != dim) throw MechanismError("aggregate", -1, "aggregate has the wrong dimension");
  kernels::add(mean_update.span(), server.global_model.span());
  const auto t1 = std::chrono::steady_clock::now();
  rec.server_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  if (!server.global_model.all_finite()) throw MechanismError("aggregate", -1, "global model became non-finite");
  server.round_index = round;
  return rec;
}

Evaluation evaluate(const ServerState& server, const std::vector<ClientState>& clients, const ModelSpec& spec,
                    AggregationMode aggregation) {
  std::vector<Dataset> tests;
  for (const auto& c : clients) {
    if (!c.test.empty()) tests.push_back(c.test);
  }
  if (tests.empty()) throw ConfigError("evaluate: no client has test data");
  const Dataset all = concatenate(tests);

  Evaluation out;
  const auto pred = predict(spec, server.global_model, all.features);
  out.global = metrics::summarize(metrics::confusion(pred, all.labels, spec.num_classes));

  std::vector<ParamVector> cores;
  if (aggregation == AggregationMode::kApple) {
    for (const auto& c : clients) cores.push_back(c.core_model);
  }
  double acc_sum = 0.0;
  std::size_t counted = 0;
  for (const auto& c : clients) {
    if (c.test.empty()) continue;
    if (aggregation == AggregationMode::kApple) {
      acc_sum += accuracy_of(spec, apple_personalize(c, cores), c.test);
    } else {
      acc_sum += accuracy_of(spec, server.global_model, c.test);
    }
    ++counted;
  }
  out.mean_personal_acc = acc_sum / static_cast<double>(counted);
  return out;
}

Dataset load_dataset(const DatasetSource& source, std::uint64_t seed) {
  if (source.synthetic) return generate_synthetic(source.spec, stream_id({seed, kDataStream}));
  return load_csv_dataset(source.csv_path);
}

Federation::Federation(const ExperimentConfig& config) : Federation(config, [&] {
    const auto errors = config.validate();
    if (!errors.empty()) return Dataset{};
    return load_dataset(config.dataset, config.seed);
  }()) {}

Federation::Federation(const ExperimentConfig& config, const Dataset& data) : config_(config) {
  const auto errors = config_.validate();
  if (!errors.empty()) {
    std::string message = "invalid configuration:";
    for (const auto& e : errors) message += "\n  - " + e;
    throw ConfigError(message);
  }
  data.validate();
  if (data.empty()) throw ConfigError("dataset is empty");

  settings_.spec = ModelSpec{config_.model, data.input_dim(), data.num_classes,
                             config_.model == ModelKind::kMlp ? config_.hidden_dim : 0};
  settings_.spec.validate();
  settings_.aggregation = config_.aggregation;
  settings_.local_epochs = config_.local_epochs;
  settings_.batch_size = config_.batch_size;
  settings_.apple = config_.apple;
  settings_.weighted = config_.weighted;
  settings_.threads = config_.threads;

  const std::size_t n = config_.num_clients;
  const auto partition = dirichlet_partition(data, n, config_.alpha, stream_id({config_.seed, kPartitionStream}));
  server_.global_model = init_params(settings_.spec, stream_id({config_.seed, kInitStream}));
  server_.round_index = 0;

  std::size_t test_rows = 0;
  clients_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ClientState& c = clients_[i];
    c.client_id = i;
    auto split = train_test_split(partition.shards[i], kTestFraction, stream_id({config_.seed, kSplitStream, i}));
    c.train = std::move(split.train);
    c.test = std::move(split.test);
    test_rows += c.test.size();
    c.core_model = server_.global_model;
    c.personal_weights.assign(n, 1.0 / static_cast<double>(n));
    c.optimizer = OptimizerState::make(config_.optimizer, config_.learning_rate, settings_.spec.param_count());
    c.rng_seed = stream_id({config_.seed, kClientStream, i});
    server_.roster.push_back(i);
  }
  if (test_rows == 0) throw ConfigError("dataset too small: no client received test rows");

  mechanism_ = privacy::make_mechanism(config_.privacy, n, config_.seed);
}

RoundRecord Federation::step() {
  RoundRecord rec = run_round(server_, clients_, *mechanism_, settings_);
  if (rec.round % config_.eval_interval == 0 || rec.round == config_.rounds) {
    const Evaluation ev = evaluate();
    rec.evaluated = true;
    rec.global_acc = ev.global.accuracy;
    rec.global_prec = ev.global.precision;
    rec.global_rec = ev.global.recall;
    rec.global_f1 = ev.global.f1;
    rec.mean_personal_acc = ev.mean_personal_acc;
  }
  return rec;
}

Evaluation Federation::evaluate() const {
  return federation::evaluate(server_, clients_, settings_.spec, config_.aggregation);
}

std::vector<RoundRecord> run_experiment(const ExperimentConfig& config) {
  Federation fed(config);
  std::vector<RoundRecord> trace;
  trace.reserve(config.rounds);
  for (std::size_t r = 0; r < config.rounds; ++r) trace.push_back(fed.step());
  return trace;
}

}  // namespace pfl::federation
