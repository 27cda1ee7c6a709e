#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/federation/aggregate.hpp"
#include "pfl/federation/apple.hpp"
#include "pfl/federation/client.hpp"
#include "pfl/federation/experiment.hpp"
#include "pfl/metrics/metrics.hpp"

using namespace pfl;
using namespace pfl::federation;

namespace {

ParamVector random_vector(SeededRng& rng, std::size_t n, double scale = 1.0) {
  ParamVector v(n);
  for (double& x : v) x = scale * rng.normal();
  return v;
}

double max_abs_diff(const ParamVector& a, const ParamVector& b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.num_clients = 4;
  cfg.rounds = 3;
  cfg.batch_size = 16;
  cfg.learning_rate = 0.01;
  cfg.dataset.spec = {400, 5, 3, 1.0};
  cfg.alpha = 1.0;
  cfg.privacy.key_bits = 256;
  cfg.seed = 5;
  return cfg;
}

ClientState apple_client(std::uint64_t id, std::vector<double> weights) {
  ClientState c;
  c.client_id = id;
  c.personal_weights = std::move(weights);
  return c;
}

bool same_trace_ignoring_time(const std::vector<RoundRecord>& a, const std::vector<RoundRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[i];
    if (x.round != y.round || x.evaluated != y.evaluated || x.global_acc != y.global_acc ||
        x.global_prec != y.global_prec || x.global_rec != y.global_rec || x.global_f1 != y.global_f1 ||
        x.mean_personal_acc != y.mean_personal_acc || x.mean_loss != y.mean_loss || x.bytes_up != y.bytes_up ||
        x.bytes_down != y.bytes_down) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("fed_avg") {
  const ParamVector a{1, 2}, b{3, 4};
  CHECK(fed_avg(std::vector{a}) == a);
  CHECK(fed_avg(std::vector{a, b}) == ParamVector{2, 3});
  CHECK(fed_avg(std::vector{b, b, b}) == b);
  CHECK_THROWS_AS(fed_avg(std::vector<ParamVector>{}), InputError);
  CHECK_THROWS_AS(fed_avg(std::vector{a, ParamVector{1}}), InputError);

  SeededRng rng(1, 0);
  std::vector<ParamVector> models;
  for (int i = 0; i < 6; ++i) models.push_back(random_vector(rng, 20));
  const auto ref = fed_avg(models);
  for (int trial = 0; trial < 10; ++trial) {
    rng.shuffle(std::span(models));
    CHECK(max_abs_diff(fed_avg(models), ref) <= 1e-14);
  }
  const std::vector<double> w{1, 1, 1, 1, 1, 1};
  CHECK(max_abs_diff(weighted_average(models, w), ref) <= 1e-14);
  CHECK(weighted_average(std::vector{a, b}, std::vector<double>{3, 1}) == ParamVector{1.5, 2.5});
  CHECK_THROWS_AS(weighted_average(std::vector{a, b}, std::vector<double>{0, 0}), InputError);
}

TEST_CASE("apple_personalize") {
  SeededRng rng(2, 0);
  std::vector<ParamVector> cores;
  for (int j = 0; j < 3; ++j) cores.push_back(random_vector(rng, 2));

  CHECK(apple_personalize(apple_client(1, {0, 1, 0}), cores) == cores[1]);
  const auto uniform = apple_personalize(apple_client(0, {1.0 / 3, 1.0 / 3, 1.0 / 3}), cores);
  CHECK(max_abs_diff(uniform, fed_avg(cores)) <= 1e-12);

  const std::vector<double> p{0.7, -0.2, 1.3};
  const auto w = apple_personalize(apple_client(2, p), cores);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(w[k] == doctest::Approx(p[0] * cores[0][k] + p[1] * cores[1][k] + p[2] * cores[2][k]).epsilon(1e-14));
  }
  CHECK_THROWS_AS(apple_personalize(apple_client(0, {0.5, 0.5}), cores), ConfigError);
}

TEST_CASE("apple_weight_gradient") {
  SeededRng rng(3, 0);
  const Dataset data = generate_synthetic({30, 4, 3, 1.0}, 9);
  const ModelSpec spec{ModelKind::kLogistic, 4, 3, 0};
  std::vector<std::size_t> rows(30);
  for (std::size_t i = 0; i < 30; ++i) rows[i] = i;

  SUBCASE("zero core with lambda 0 has zero gradient") {
    std::vector<ParamVector> cores{random_vector(rng, spec.param_count()), ParamVector(spec.param_count())};
    const auto g = apple_weight_gradient(apple_client(0, {0.5, 0.5}), spec, cores, data, rows, 0.0);
    CHECK(g[1] == 0.0);
  }
  SUBCASE("matches finite differences") {
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 2 + rng.uniform_below(4);
      std::vector<ParamVector> cores;
      std::vector<double> p(n);
      for (std::size_t j = 0; j < n; ++j) {
        cores.push_back(random_vector(rng, spec.param_count(), 0.5));
        p[j] = rng.uniform();
      }
      const double lambda = rng.uniform();
      auto client = apple_client(rng.uniform_below(n), p);
      const auto g = apple_weight_gradient(client, spec, cores, data, rows, lambda);
      constexpr double h = 1e-5;
      for (std::size_t j = 0; j < n; ++j) {
        auto up = client, down = client;
        up.personal_weights[j] += h;
        down.personal_weights[j] -= h;
        const double numeric = (apple_objective(up, spec, cores, data, rows, lambda) -
                                apple_objective(down, spec, cores, data, rows, lambda)) /
                               (2 * h);
        CHECK(g[j] == doctest::Approx(numeric).epsilon(1e-5));
      }
    }
  }
  SUBCASE("penalty is stationary at the self one-hot") {
    std::vector<ParamVector> cores{random_vector(rng, spec.param_count()), random_vector(rng, spec.param_count())};
    const auto client = apple_client(1, {0.0, 1.0});
    const auto g0 = apple_weight_gradient(client, spec, cores, data, rows, 0.0);
    const auto big = apple_weight_gradient(client, spec, cores, data, rows, 1e6);
    CHECK(big[1] == doctest::Approx(g0[1]));
    CHECK(big[0] == doctest::Approx(g0[0]));
  }
}

TEST_CASE("local_train") {
  const ModelSpec spec{ModelKind::kLogistic, 5, 3, 0};
  ClientState c;
  c.train = generate_synthetic({300, 5, 3, 3.0}, 4);
  c.optimizer = OptimizerState::make(OptimizerKind::kAdam, 0.05, spec.param_count());
  c.rng_seed = 17;
  const ParamVector start(spec.param_count());

  CHECK(local_train(c, spec, start, 0, 32, 1).model == start);

  auto c2 = c;
  const auto r1 = local_train(c, spec, start, 2, 32, 1);
  const auto r2 = local_train(c2, spec, start, 2, 32, 1);
  CHECK(r1.model == r2.model);
  CHECK(r1.steps == 20);
  CHECK(c.optimizer.step == 20);

  auto trained = c;
  const auto r = local_train(trained, spec, start, 20, 32, 2);
  const auto pred = predict(spec, r.model, c.train.features);
  CHECK(metrics::accuracy(metrics::confusion(pred, c.train.labels, 3)) >= 0.9);

  ClientState empty;
  empty.train.features = Matrix(0, 5);
  empty.train.num_classes = 3;
  const auto e = local_train(empty, spec, start, 3, 32, 1);
  CHECK(e.empty_shard);
  CHECK(e.model == start);
}

TEST_CASE("run_round with no training leaves the global model unchanged") {
  const ModelSpec spec{ModelKind::kLogistic, 3, 2, 0};
  SeededRng rng(5, 0);
  ServerState server{random_vector(rng, spec.param_count()), 0, {0}};
  const ParamVector before = server.global_model;
  std::vector<ClientState> clients(1);
  clients[0].train = generate_synthetic({20, 3, 2, 1.0}, 1);
  clients[0].core_model = server.global_model;
  clients[0].optimizer = OptimizerState::make(OptimizerKind::kAdam, 0.01, spec.param_count());
  privacy::PrivacyConfig none;
  const auto mech = privacy::make_mechanism(none, 1, 1);
  RoundSettings settings;
  settings.spec = spec;
  settings.local_epochs = 0;
  const auto rec = run_round(server, clients, *mech, settings);
  CHECK(server.global_model == before);
  CHECK(server.round_index == 1);
  CHECK(rec.round == 1);
  CHECK(rec.server_ms >= 0.0);
  CHECK(rec.bytes_up == 9 + 8 * spec.param_count());
  CHECK(rec.bytes_down == rec.bytes_up);
}

TEST_CASE("cryptographic mechanisms track the plaintext pipeline") {
  auto cfg = small_config();
  Federation plain(cfg);
  for (std::size_t r = 0; r < cfg.rounds; ++r) plain.step();
  for (auto kind : {privacy::MechanismKind::kSa, privacy::MechanismKind::kSmpc, privacy::MechanismKind::kHe}) {
    CAPTURE(privacy::mechanism_name(kind));
    auto c = cfg;
    c.privacy.mechanism = kind;
    Federation fed(c);
    for (std::size_t r = 0; r < c.rounds; ++r) fed.step();
    CHECK(max_abs_diff(fed.server().global_model, plain.server().global_model) <= 1e-4);
  }
}

TEST_CASE("dp with zero noise matches the plaintext pipeline exactly") {
  auto cfg = small_config();
  Federation plain(cfg);
  cfg.privacy.mechanism = privacy::MechanismKind::kDp;
  cfg.privacy.forced_noise_scale = 0.0;
  cfg.privacy.clip_norm = 1e9;
  Federation dp(cfg);
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    plain.step();
    dp.step();
  }
  CHECK(dp.server().global_model == plain.server().global_model);
}

TEST_CASE("serial and parallel clients give identical traces") {
  for (auto agg : {AggregationMode::kFedAvg, AggregationMode::kApple}) {
    auto cfg = small_config();
    cfg.aggregation = agg;
    cfg.privacy.mechanism = privacy::MechanismKind::kSa;
    cfg.threads = 1;
    Federation serial(cfg);
    cfg.threads = 4;
    Federation parallel(cfg);
    std::vector<RoundRecord> a, b;
    for (std::size_t r = 0; r < cfg.rounds; ++r) {
      a.push_back(serial.step());
      b.push_back(parallel.step());
    }
    CHECK(same_trace_ignoring_time(a, b));
    CHECK(serial.server().global_model == parallel.server().global_model);
    for (std::size_t i = 0; i < cfg.num_clients; ++i) {
      CHECK(serial.clients()[i].personal_weights == parallel.clients()[i].personal_weights);
    }
  }
}

TEST_CASE("run_experiment") {
  auto cfg = small_config();
  cfg.rounds = 0;
  CHECK(run_experiment(cfg).empty());

  cfg.rounds = 4;
  cfg.eval_interval = 3;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  REQUIRE(a.size() == 4);
  CHECK(same_trace_ignoring_time(a, b));
  CHECK_FALSE(a[0].evaluated);
  CHECK(a[2].evaluated);
  CHECK(a[3].evaluated);  // the last round is always evaluated
  for (const auto& r : a) {
    CHECK(r.server_ms >= 0.0);
    CHECK(r.global_acc >= 0.0);
    CHECK(r.global_acc <= 1.0);
  }
}

TEST_CASE("apple mode") {
  auto cfg = small_config();
  cfg.aggregation = AggregationMode::kApple;
  Federation fed(cfg);
  const std::size_t n = cfg.num_clients;
  for (const auto& c : fed.clients()) {
    CHECK(c.personal_weights == std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }
  const auto rec = fed.step();
  const std::uint64_t model_bytes = 9 + 8 * fed.model_spec().param_count();
  CHECK(rec.bytes_down == n * (n - 1) * model_bytes);
  bool moved = false;
  for (const auto& c : fed.clients()) {
    CHECK(c.personal_weights.size() == n);
    for (double p : c.personal_weights) {
      CHECK(std::isfinite(p));
      moved |= p != 1.0 / static_cast<double>(n);
    }
  }
  CHECK(moved);
  // The server model stays the mean of the cores for the plaintext mechanism.
  std::vector<ParamVector> cores;
  for (const auto& c : fed.clients()) cores.push_back(c.core_model);
  CHECK(max_abs_diff(fed.server().global_model, fed_avg(cores)) <= 1e-12);
}

TEST_CASE("weighted averaging follows shard sizes") {
  auto cfg = small_config();
  cfg.weighted = true;
  cfg.alpha = 0.3;
  Federation fed(cfg);
  const ParamVector start = fed.server().global_model;
  fed.step();
  std::vector<ParamVector> deltas;
  std::vector<double> sizes;
  for (const auto& c : fed.clients()) {
    ParamVector d = c.core_model;
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= start[k];
    deltas.push_back(d);
    sizes.push_back(static_cast<double>(c.train.size()));
  }
  const auto expected = weighted_average(deltas, sizes);
  ParamVector actual = fed.server().global_model;
  for (std::size_t k = 0; k < actual.size(); ++k) actual[k] -= start[k];
  CHECK(max_abs_diff(actual, expected) <= 1e-12);
}

TEST_CASE("mechanism failures name the stage and client") {
  auto cfg = small_config();
  cfg.privacy.mechanism = privacy::MechanismKind::kSmpc;
  cfg.privacy.max_abs_value = 1e-9;
  Federation fed(cfg);
  try {
    fed.step();
    FAIL("expected MechanismError");
  } catch (const MechanismError& e) {
    CHECK(e.stage() == "protect");
    CHECK(e.client_id() == 0);
    CHECK(std::string(e.what()).find("client 0") != std::string::npos);
  }
}

TEST_CASE("configuration errors are all reported before any work") {
  auto cfg = small_config();
  cfg.num_clients = 0;
  cfg.batch_size = 0;
  cfg.alpha = -1.0;
  cfg.privacy.key_bits = 100;
  const auto errors = cfg.validate();
  CHECK(errors.size() == 3);  // privacy checks need N >= 1
  cfg.num_clients = 2;
  CHECK(cfg.validate().size() == 3);
  try {
    Federation fed(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("batch-size") != std::string::npos);
    CHECK(msg.find("alpha") != std::string::npos);
    CHECK(msg.find("key bits") != std::string::npos);
  }
  CHECK(parse_aggregation("apple") == AggregationMode::kApple);
  CHECK_FALSE(parse_aggregation("ditto").has_value());
}
