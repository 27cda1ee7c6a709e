#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pfl/federation/experiment.hpp"

namespace pfl::harness {

inline constexpr std::array<std::string_view, 10> kRoundsColumns = {
    "round",     "global_acc", "global_prec", "global_rec", "global_f1", "mean_personal_acc",
    "mean_loss", "server_ms",  "bytes_up",    "bytes_down"};

inline constexpr std::array<std::string_view, 10> kSummaryColumns = {
    "mechanism", "agg",    "clients",         "acc_pct",             "prec_pct",
    "rec_pct",   "f1_pct", "total_server_ms", "per_round_server_ms", "total_bytes"};

// Columns carrying wall-clock measurements.
inline constexpr std::array<std::string_view, 3> kTimingColumns = {"server_ms", "total_server_ms",
                                                                   "per_round_server_ms"};

struct SummaryRow {
  std::string mechanism;
  std::string agg;
  std::size_t clients = 0;
  // Percent, rounded to 2 decimals.
  double acc_pct = 0.0;
  double prec_pct = 0.0;
  double rec_pct = 0.0;
  double f1_pct = 0.0;
  double total_server_ms = 0.0;
  double per_round_server_ms = 0.0;
  std::uint64_t total_bytes = 0;
};

// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);
// 100 * fraction rounded to 2 decimals.
double to_percent(double fraction);

void write_rounds_header(std::ostream& os);
void write_rounds_row(std::ostream& os, const federation::RoundRecord& rec);
void write_summary_header(std::ostream& os);
void write_summary_row(std::ostream& os, const SummaryRow& row);

// Header row first. Throws ParseError on ragged rows.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace pfl::harness
