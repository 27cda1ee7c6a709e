#include "pfl/harness/config.hpp"

#include <algorithm>
#include <sstream>

#include "CLI11.hpp"
#include "pfl/errors.hpp"
#include "pfl/harness/csv.hpp"

namespace pfl::harness {
namespace {

struct RawFlags {
  std::string model = "logistic";
  std::string optimizer = "adam";
  std::string dataset = "synthetic";
  std::string agg = "fedavg";
  std::string mechanism = "none";
  std::string noise = "laplace";
  std::vector<std::string> sweep_mechanisms;
};

std::string dataset_flag(const federation::DatasetSource& d) {
  return d.synthetic ? "synthetic" : "csv:" + d.csv_path;
}

}  // namespace

HarnessOptions parse_config(const std::vector<std::string>& args) {
  HarnessOptions out;
  auto& cfg = out.experiment;
  auto& priv = cfg.privacy;
  RawFlags raw;

  CLI::App app{"Privacy-preserving federated learning simulator", "pfl_sim"};
  app.set_config("--config", "", "key=value file; flags take precedence")->check(CLI::ExistingFile);
  app.allow_config_extras(false);

  app.add_option("--clients", cfg.num_clients, "number of clients N")->capture_default_str();
  app.add_option("--rounds", cfg.rounds, "federation rounds R")->capture_default_str();
  app.add_option("--epochs", cfg.local_epochs, "local epochs per round")->capture_default_str();
  app.add_option("--batch-size", cfg.batch_size)->capture_default_str();
  app.add_option("--model", raw.model, "logistic | mlp")->capture_default_str();
  app.add_option("--hidden-dim", cfg.hidden_dim, "mlp hidden units")->capture_default_str();
  app.add_option("--optimizer", raw.optimizer, "adam | sgd")->capture_default_str();
  app.add_option("--lr", cfg.learning_rate)->capture_default_str();
  app.add_option("--dataset", raw.dataset, "synthetic | csv:<path>")->capture_default_str();
  app.add_option("--synthetic-examples", cfg.dataset.spec.num_examples)->capture_default_str();
  app.add_option("--input-dim", cfg.dataset.spec.input_dim, "synthetic feature count")->capture_default_str();
  app.add_option("--classes", cfg.dataset.spec.num_classes, "synthetic class count")->capture_default_str();
  app.add_option("--class-sep", cfg.dataset.spec.class_separation, "synthetic class-center spread")
      ->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Dirichlet concentration")->capture_default_str();
  app.add_option("--agg", raw.agg, "fedavg | apple")->capture_default_str();
  app.add_option("--eta-p", cfg.apple.eta_p, "apple weight learning rate")->capture_default_str();
  app.add_option("--lambda", cfg.apple.lambda, "apple self-weight penalty")->capture_default_str();
  app.add_flag("--weighted", cfg.weighted, "sample-weighted FedAvg");
  app.add_option("--mechanism", raw.mechanism, "none | dp | he | sa | smpc")->capture_default_str();
  app.add_option("--epsilon", priv.epsilon)->capture_default_str();
  app.add_option("--clip", priv.clip_norm, "DP clipping bound S")->capture_default_str();
  app.add_option("--noise", raw.noise, "laplace | gaussian")->capture_default_str();
  app.add_option("--delta", priv.delta)->capture_default_str();
  app.add_option("--key-bits", priv.key_bits, "Paillier modulus bits")->capture_default_str();
  app.add_option("--scale-bits", priv.scale_bits, "fixed-point fractional bits")->capture_default_str();
  app.add_option("--parties", priv.num_parties, "SMPC compute parties")->capture_default_str();
  app.add_option("--seed", cfg.seed)->capture_default_str();
  app.add_option("--eval-every", cfg.eval_interval)->capture_default_str();
  app.add_option("--threads", cfg.threads, "client training threads")->capture_default_str();
  app.add_option("--out", cfg.output_dir, "output directory")->capture_default_str();
  app.add_option("--sweep-clients", out.sweep_clients, "comma list of client counts")->delimiter(',');
  app.add_option("--sweep-mechanisms", raw.sweep_mechanisms, "comma list of mechanisms")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out.help_text = app.help();
    return out;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  std::vector<std::string> errors;
  if (raw.model == "logistic") {
    cfg.model = ModelKind::kLogistic;
  } else if (raw.model == "mlp") {
    cfg.model = ModelKind::kMlp;
  } else {
    errors.push_back("unknown model '" + raw.model + "'");
  }
  if (raw.optimizer == "adam") {
    cfg.optimizer = OptimizerKind::kAdam;
  } else if (raw.optimizer == "sgd") {
    cfg.optimizer = OptimizerKind::kSgd;
  } else {
    errors.push_back("unknown optimizer '" + raw.optimizer + "'");
  }
  if (raw.dataset == "synthetic") {
    cfg.dataset.synthetic = true;
  } else if (raw.dataset.rfind("csv:", 0) == 0) {
    cfg.dataset.synthetic = false;
    cfg.dataset.csv_path = raw.dataset.substr(4);
  } else {
    errors.push_back("dataset must be 'synthetic' or 'csv:<path>', got '" + raw.dataset + "'");
  }
  if (auto agg = federation::parse_aggregation(raw.agg)) {
    cfg.aggregation = *agg;
  } else {
    errors.push_back("unknown aggregation '" + raw.agg + "'");
  }
  if (auto mech = privacy::parse_mechanism(raw.mechanism)) {
    priv.mechanism = *mech;
  } else {
    errors.push_back("unknown mechanism '" + raw.mechanism + "'");
  }
  if (auto noise = privacy::parse_noise(raw.noise)) {
    priv.noise = *noise;
  } else {
    errors.push_back("unknown noise '" + raw.noise + "'");
  }
  for (const auto& name : raw.sweep_mechanisms) {
    if (auto mech = privacy::parse_mechanism(name)) {
      out.sweep_mechanisms.push_back(*mech);
    } else {
      errors.push_back("unknown mechanism '" + name + "' in sweep-mechanisms");
    }
  }

  if (errors.empty()) {
    errors = cfg.validate();
    // Sweep points must satisfy the client-count dependent checks too.
    auto mechanisms = out.sweep_mechanisms;
    if (mechanisms.empty()) mechanisms.push_back(priv.mechanism);
    for (std::size_t n : out.sweep_clients) {
      for (auto mech : mechanisms) {
        auto point = cfg;
        point.num_clients = n;
        point.privacy.mechanism = mech;
        for (auto& e : point.validate()) {
          e = "sweep point " + std::string(privacy::mechanism_name(mech)) + " N=" + std::to_string(n) + ": " + e;
          if (std::find(errors.begin(), errors.end(), e) == errors.end()) errors.push_back(std::move(e));
        }
      }
    }
  }
  if (!errors.empty()) {
    std::string message = "invalid configuration:";
    for (const auto& e : errors) message += "\n  - " + e;
    throw ConfigError(message);
  }
  return out;
}

HarnessOptions parse_config(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return parse_config(args);
}

std::string describe(const HarnessOptions& options) {
  const auto& cfg = options.experiment;
  const auto& priv = cfg.privacy;
  std::ostringstream os;
  os << "clients=" << cfg.num_clients << '\n'
     << "rounds=" << cfg.rounds << '\n'
     << "epochs=" << cfg.local_epochs << '\n'
     << "batch-size=" << cfg.batch_size << '\n'
     << "model=" << model_kind_name(cfg.model) << '\n'
     << "hidden-dim=" << cfg.hidden_dim << '\n'
     << "optimizer=" << optimizer_kind_name(cfg.optimizer) << '\n'
     << "lr=" << format_double(cfg.learning_rate) << '\n'
     << "dataset=" << dataset_flag(cfg.dataset) << '\n'
     << "synthetic-examples=" << cfg.dataset.spec.num_examples << '\n'
     << "input-dim=" << cfg.dataset.spec.input_dim << '\n'
     << "classes=" << cfg.dataset.spec.num_classes << '\n'
     << "class-sep=" << format_double(cfg.dataset.spec.class_separation) << '\n'
     << "alpha=" << format_double(cfg.alpha) << '\n'
     << "agg=" << federation::aggregation_name(cfg.aggregation) << '\n'
     << "eta-p=" << format_double(cfg.apple.eta_p) << '\n'
     << "lambda=" << format_double(cfg.apple.lambda) << '\n'
     << "weighted=" << (cfg.weighted ? "true" : "false") << '\n'
     << "mechanism=" << privacy::mechanism_name(priv.mechanism) << '\n'
     << "epsilon=" << format_double(priv.epsilon) << '\n'
     << "clip=" << format_double(priv.clip_norm) << '\n'
     << "noise=" << privacy::noise_name(priv.noise) << '\n'
     << "delta=" << format_double(priv.delta) << '\n'
     << "key-bits=" << priv.key_bits << '\n'
     << "scale-bits=" << priv.scale_bits << '\n'
     << "parties=" << priv.num_parties << '\n'
     << "seed=" << cfg.seed << '\n'
     << "eval-every=" << cfg.eval_interval << '\n'
     << "threads=" << cfg.threads << '\n'
     << "out=" << cfg.output_dir << '\n';
  if (!options.sweep_clients.empty()) {
    os << "sweep-clients=";
    for (std::size_t i = 0; i < options.sweep_clients.size(); ++i) {
      os << (i ? "," : "") << options.sweep_clients[i];
    }
    os << '\n';
  }
  if (!options.sweep_mechanisms.empty()) {
    os << "sweep-mechanisms=";
    for (std::size_t i = 0; i < options.sweep_mechanisms.size(); ++i) {
      os << (i ? "," : "") << privacy::mechanism_name(options.sweep_mechanisms[i]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pfl::harness
