#include "pfl/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "pfl/errors.hpp"

namespace pfl::harness {
namespace {

template <std::size_t N>
void write_header(std::ostream& os, const std::array<std::string_view, N>& columns) {
  for (std::size_t i = 0; i < N; ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double to_percent(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

void write_rounds_header(std::ostream& os) { write_header(os, kRoundsColumns); }

void write_rounds_row(std::ostream& os, const federation::RoundRecord& rec) {
  os << rec.round << ',' << format_double(rec.global_acc) << ',' << format_double(rec.global_prec) << ','
     << format_double(rec.global_rec) << ',' << format_double(rec.global_f1) << ','
     << format_double(rec.mean_personal_acc) << ',' << format_double(rec.mean_loss) << ','
     << format_double(rec.server_ms) << ',' << rec.bytes_up << ',' << rec.bytes_down << '\n';
}

void write_summary_header(std::ostream& os) { write_header(os, kSummaryColumns); }

void write_summary_row(std::ostream& os, const SummaryRow& row) {
  os << row.mechanism << ',' << row.agg << ',' << row.clients << ',' << format_double(row.acc_pct) << ','
     << format_double(row.prec_pct) << ',' << format_double(row.rec_pct) << ',' << format_double(row.f1_pct) << ','
     << format_double(row.total_server_ms) << ',' << format_double(row.per_round_server_ms) << ','
     << row.total_bytes << '\n';
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && fields.size() != rows.front().size()) {
      throw ParseError(line_no, "expected " + std::to_string(rows.front().size()) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace pfl::harness
