#include "pfl/harness/runner.hpp"

#include <fstream>
#include <ostream>
#include <string>

#include "pfl/errors.hpp"

namespace pfl::harness {
namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

RunResult run_experiment_to(const federation::ExperimentConfig& config, std::ostream& rounds_csv, std::ostream* log) {
  federation::Federation fed(config);
  RunResult result;
  result.rounds.reserve(config.rounds);
  write_rounds_header(rounds_csv);
  rounds_csv.flush();

  double total_ms = 0.0;
  std::uint64_t total_bytes = 0;
  for (std::size_t r = 0; r < config.rounds; ++r) {
    auto rec = fed.step();
    total_ms += rec.server_ms;
    total_bytes += rec.bytes_up + rec.bytes_down;
    if (rec.evaluated) {
      write_rounds_row(rounds_csv, rec);
      rounds_csv.flush();
      if (log) {
        *log << "round " << rec.round << ": acc=" << rec.global_acc << " personal=" << rec.mean_personal_acc
             << " loss=" << rec.mean_loss << " server_ms=" << rec.server_ms << '\n';
      }
    }
    result.rounds.push_back(rec);
  }

  SummaryRow& row = result.summary;
  row.mechanism = std::string(privacy::mechanism_name(config.privacy.mechanism));
  row.agg = std::string(federation::aggregation_name(config.aggregation));
  row.clients = config.num_clients;
  metrics::Summary final_metrics;
  if (!result.rounds.empty()) {
    const auto& last = result.rounds.back();  // the last round is always evaluated
    final_metrics = {last.global_acc, last.global_prec, last.global_rec, last.global_f1};
  } else {
    final_metrics = fed.evaluate().global;
  }
  row.acc_pct = to_percent(final_metrics.accuracy);
  row.prec_pct = to_percent(final_metrics.precision);
  row.rec_pct = to_percent(final_metrics.recall);
  row.f1_pct = to_percent(final_metrics.f1);
  row.total_server_ms = total_ms;
  row.per_round_server_ms = config.rounds > 0 ? total_ms / static_cast<double>(config.rounds) : 0.0;
  row.total_bytes = total_bytes;
  return result;
}

RunResult run(const federation::ExperimentConfig& config, std::ostream* log) {
  const std::filesystem::path dir = config.output_dir;
  prepare_dir(dir);
  auto rounds_csv = open_output(dir / "rounds.csv");
  RunResult result = run_experiment_to(config, rounds_csv, log);
  auto summary_csv = open_output(dir / "summary.csv");
  write_summary_header(summary_csv);
  write_summary_row(summary_csv, result.summary);
  return result;
}

std::vector<SummaryRow> sweep(const federation::ExperimentConfig& config, std::span<const std::size_t> client_counts,
                              std::span<const privacy::MechanismKind> mechanisms, std::ostream* log) {
  if (client_counts.empty()) throw ConfigError("sweep: client count list is empty");
  std::vector<privacy::MechanismKind> mechs(mechanisms.begin(), mechanisms.end());
  if (mechs.empty()) mechs.push_back(config.privacy.mechanism);

  const std::filesystem::path dir = config.output_dir;
  prepare_dir(dir);
  auto summary_csv = open_output(dir / "summary.csv");
  write_summary_header(summary_csv);

  std::vector<SummaryRow> rows;
  for (auto mech : mechs) {
    for (std::size_t n : client_counts) {
      auto point = config;
      point.num_clients = n;
      point.privacy.mechanism = mech;
      const std::string name =
          "rounds_" + std::string(privacy::mechanism_name(mech)) + "_n" + std::to_string(n) + ".csv";
      if (log) *log << "sweep point " << privacy::mechanism_name(mech) << " N=" << n << '\n';
      auto rounds_csv = open_output(dir / name);
      auto result = run_experiment_to(point, rounds_csv, log);
      write_summary_row(summary_csv, result.summary);
      summary_csv.flush();
      rows.push_back(result.summary);
    }
  }
  return rows;
}

}  // namespace pfl::harness
