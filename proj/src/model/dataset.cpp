#include "pfl/model/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <string>
#include <string_view>

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"

namespace pfl {
namespace {

enum StreamTag : std::uint64_t {
  kSyntheticCenters = 0x5359'4e43,
  kSyntheticRows = 0x5359'4e52,
  kPartition = 0x5041'5254,
  kSplit = 0x5350'4c54,
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_int(std::string_view field, long& out) {
  if (field.empty()) return false;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

void Dataset::validate() const {
  if (features.rows != labels.size()) {
    throw InputError("dataset: " + std::to_string(features.rows) + " feature rows but " +
                     std::to_string(labels.size()) + " labels");
  }
  if (features.data.size() != features.rows * features.cols) {
    throw InputError("dataset: feature storage does not match its shape");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= num_classes) {
      throw InputError("dataset: label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                       " is not below num_classes " + std::to_string(num_classes));
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.num_classes = num_classes;
  out.features = Matrix(rows.size(), features.cols);
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = features.row(rows[i]);
    std::copy(src.begin(), src.end(), out.features.row(i).begin());
    out.labels.push_back(labels[rows[i]]);
  }
  return out;
}

Dataset concatenate(std::span<const Dataset> parts) {
  Dataset out;
  if (!parts.empty()) out.features.cols = parts.front().input_dim();
  for (const Dataset& part : parts) {
    out.num_classes = std::max(out.num_classes, part.num_classes);
    if (part.empty()) continue;
    if (part.input_dim() != out.features.cols) throw ConfigError("concatenate: feature widths differ");
    out.features.data.insert(out.features.data.end(), part.features.data.begin(), part.features.data.end());
    out.features.rows += part.features.rows;
    out.labels.insert(out.labels.end(), part.labels.begin(), part.labels.end());
  }
  return out;
}

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.num_examples < 1 || spec.input_dim < 1 || spec.num_classes < 1) {
    throw InputError("generate_synthetic: counts must be >= 1");
  }
  SeededRng center_rng(seed, stream_id({kSyntheticCenters}));
  Matrix centers(spec.num_classes, spec.input_dim);
  for (double& v : centers.data) v = spec.class_separation * center_rng.normal();

  SeededRng row_rng(seed, stream_id({kSyntheticRows}));
  Dataset out;
  out.num_classes = spec.num_classes;
  out.features = Matrix(spec.num_examples, spec.input_dim);
  out.labels.resize(spec.num_examples);
  for (std::size_t i = 0; i < spec.num_examples; ++i) {
    const auto label = static_cast<std::uint32_t>(row_rng.uniform_below(spec.num_classes));
    out.labels[i] = label;
    auto row = out.features.row(i);
    const auto center = centers.row(label);
    for (std::size_t j = 0; j < spec.input_dim; ++j) row[j] = center[j] + row_rng.normal();
  }
  return out;
}

Dataset load_csv_dataset(const std::filesystem::path& path, std::size_t num_classes) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");

  Dataset out;
  std::size_t width = 0;
  std::size_t line_no = 0;
  bool seen_content = false;
  std::string line;
  std::uint32_t max_label = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    const auto fields = split_fields(text);
    long label = 0;
    if (!seen_content) {
      seen_content = true;
      if (!parse_int(fields.front(), label)) continue;  // header line
    }
    if (!parse_int(fields.front(), label) || label < 0) {
      throw ParseError(line_no, "label field '" + std::string(fields.front()) + "' is not a non-negative integer");
    }
    if (fields.size() < 2) throw ParseError(line_no, "row has no feature fields");
    if (width == 0) width = fields.size() - 1;
    if (fields.size() - 1 != width) {
      throw ParseError(line_no, "expected " + std::to_string(width + 1) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      long pixel = 0;
      if (!parse_int(fields[j], pixel) || pixel < 0 || pixel > 255) {
        throw ParseError(line_no, "field " + std::to_string(j + 1) + " ('" + std::string(fields[j]) +
                                      "') is not an integer in [0, 255]");
      }
      out.features.data.push_back(static_cast<double>(pixel) / 255.0);
    }
    out.labels.push_back(static_cast<std::uint32_t>(label));
    max_label = std::max(max_label, static_cast<std::uint32_t>(label));
  }
  if (out.labels.empty()) throw ParseError(line_no, "no data rows in '" + path.string() + "'");

  out.features.rows = out.labels.size();
  out.features.cols = width;
  out.num_classes = num_classes == 0 ? std::max<std::size_t>(2, max_label + 1) : num_classes;
  out.validate();
  return out;
}

Partition dirichlet_partition(const Dataset& data, std::size_t num_clients, double alpha, std::uint64_t seed) {
  if (num_clients < 1) throw InputError("dirichlet_partition: num_clients must be >= 1");
  if (!(alpha > 0.0)) throw InputError("dirichlet_partition: alpha must be positive");

  SeededRng rng(seed, stream_id({kPartition}));
  std::vector<std::vector<std::size_t>> by_class(data.num_classes);
  for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);

  Partition out;
  out.assignments.resize(num_clients);
  std::vector<double> proportions(num_clients);
  for (auto& rows : by_class) {
    rng.shuffle(std::span(rows));
    double total = 0.0;
    for (double& p : proportions) {
      p = rng.gamma(alpha);
      total += p;
    }
    if (!(total > 0.0)) {
      // Every draw underflowed (tiny alpha): the class goes to one client.
      std::fill(proportions.begin(), proportions.end(), 0.0);
      proportions[rng.uniform_below(num_clients)] = 1.0;
      total = 1.0;
    }
    const std::size_t n = rows.size();
    double cumulative = 0.0;
    std::size_t begin = 0;
    for (std::size_t k = 0; k < num_clients; ++k) {
      cumulative += proportions[k] / total;
      std::size_t end = k + 1 == num_clients ? n : std::min(n, static_cast<std::size_t>(std::floor(cumulative * n)));
      end = std::max(end, begin);
      out.assignments[k].insert(out.assignments[k].end(), rows.begin() + begin, rows.begin() + end);
      begin = end;
    }
  }

  out.shards.reserve(num_clients);
  for (std::size_t k = 0; k < num_clients; ++k) {
    auto& rows = out.assignments[k];
    std::sort(rows.begin(), rows.end());
    out.shards.push_back(data.subset(rows));
    if (rows.empty()) out.empty_clients.push_back(k);
  }
  return out;
}

TrainTestSplit train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw InputError("train_test_split: test_fraction must lie in [0, 1]");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  SeededRng rng(seed, stream_id({kSplit}));
  rng.shuffle(std::span(order));
  const auto test_count = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(data.size())));
  std::vector<std::size_t> test(order.begin(), order.begin() + test_count);
  std::vector<std::size_t> train(order.begin() + test_count, order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {data.subset(train), data.subset(test)};
}

}  // namespace pfl
