#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pfl::metrics {

// One-vs-rest counts for a single class.
struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  friend bool operator==(const ClassCounts&, const ClassCounts&) = default;
};

struct ConfusionCounts {
  std::vector<ClassCounts> per_class;
  std::uint64_t total = 0;

  std::size_t num_classes() const { return per_class.size(); }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Throws InputError on empty input, length mismatch or a label >= C.
ConfusionCounts confusion(std::span<const std::uint32_t> predictions, std::span<const std::uint32_t> truths,
                          std::size_t num_classes);

// Two-class counts from the positive class's TP/TN/FP/FN. Class 1 is the
// positive class; class 0 holds the mirrored counts.
ConfusionCounts binary_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn);

enum class Averaging { kMacro, kWeighted, kPositiveClass };

std::string_view averaging_name(Averaging averaging);

// A metric value plus the classes whose ratio had a zero denominator and
// were counted as 0.
struct MetricValue {
  double value = 0.0;
  std::vector<std::size_t> zero_denominator_classes;

  bool flagged() const { return !zero_denominator_classes.empty(); }
};

// Sum of per-class TP over the total; equals (TP + TN) / total for C = 2.
double accuracy(const ConfusionCounts& counts);

std::vector<double> per_class_precision(const ConfusionCounts& counts);
std::vector<double> per_class_recall(const ConfusionCounts& counts);
std::vector<double> per_class_f1(const ConfusionCounts& counts);

// kPositiveClass requires C = 2 and reports class 1. kWeighted weights each
// class by its support (TP + FN).
MetricValue precision(const ConfusionCounts& counts, Averaging averaging = Averaging::kMacro);
MetricValue recall(const ConfusionCounts& counts, Averaging averaging = Averaging::kMacro);
MetricValue f1(const ConfusionCounts& counts, Averaging averaging = Averaging::kMacro);

struct Summary {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Summary summarize(const ConfusionCounts& counts, Averaging averaging = Averaging::kMacro);

}  // namespace pfl::metrics
