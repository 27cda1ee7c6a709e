#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "pfl/federation/experiment.hpp"
#include "pfl/harness/csv.hpp"

namespace pfl::harness {

struct RunResult {
  std::vector<federation::RoundRecord> rounds;
  SummaryRow summary;
};

// Runs one experiment, streaming evaluated rounds into `rounds_csv` (each
// row flushed as it completes, so a failed run leaves a partial file).
// With zero rounds the summary holds the untrained model's metrics.
RunResult run_experiment_to(const federation::ExperimentConfig& config, std::ostream& rounds_csv,
                            std::ostream* log = nullptr);

// run_experiment_to writing <output_dir>/rounds.csv and summary.csv.
RunResult run(const federation::ExperimentConfig& config, std::ostream* log = nullptr);

// Cross product of mechanisms x client counts. Writes one summary.csv with
// a row per point plus rounds_<mechanism>_n<N>.csv for each point. An empty
// mechanism list means the configured mechanism.
std::vector<SummaryRow> sweep(const federation::ExperimentConfig& config, std::span<const std::size_t> client_counts,
                              std::span<const privacy::MechanismKind> mechanisms, std::ostream* log = nullptr);

}  // namespace pfl::harness
