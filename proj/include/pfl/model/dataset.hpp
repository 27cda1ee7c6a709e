#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace pfl {

// Row-major dense matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct Dataset {
  Matrix features;
  std::vector<std::uint32_t> labels;
  std::size_t num_classes = 0;

  std::size_t size() const { return labels.size(); }
  bool empty() const { return labels.empty(); }
  std::size_t input_dim() const { return features.cols; }

  // Throws InputError when rows and labels disagree or a label is >= C.
  void validate() const;
  Dataset subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

Dataset concatenate(std::span<const Dataset> parts);

struct SyntheticSpec {
  std::size_t num_examples = 6000;
  std::size_t input_dim = 784;
  std::size_t num_classes = 10;
  // Standard deviation of the class-center coordinates; per-example noise
  // has unit standard deviation.
  double class_separation = 0.1;
};

// Gaussian mixture with one center per class. Labels are drawn uniformly.
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// CSV rows "label,v1,...,vD" with integer pixel values in [0, 255]; features
// are scaled by 1/255. A first line whose first field is non-numeric is a
// header and is skipped. Throws ParseError naming the offending line.
// num_classes = 0 derives C as max label + 1.
Dataset load_csv_dataset(const std::filesystem::path& path, std::size_t num_classes = 0);

struct Partition {
  std::vector<Dataset> shards;
  // For every shard, the rows of the input it received (input order).
  std::vector<std::vector<std::size_t>> assignments;
  // Clients that received no examples.
  std::vector<std::size_t> empty_clients;
};

// Per-class Dirichlet(alpha) allocation across clients. Every input row
// lands in exactly one shard.
Partition dirichlet_partition(const Dataset& data, std::size_t num_clients, double alpha,
                              std::uint64_t seed);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// Shuffled split with round(test_fraction * n) test rows.
TrainTestSplit train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed);

}  // namespace pfl
