#include "pfl/metrics/metrics.hpp"

#include <string>

#include "pfl/errors.hpp"

namespace pfl::metrics {
namespace {

void require_nonempty(const ConfusionCounts& counts) {
  if (counts.total == 0 || counts.per_class.empty()) throw InputError("metrics: empty confusion counts");
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

using ClassDenominator = std::uint64_t (*)(const ClassCounts&);

std::uint64_t precision_den(const ClassCounts& c) { return c.tp + c.fp; }
std::uint64_t recall_den(const ClassCounts& c) { return c.tp + c.fn; }

MetricValue average(const ConfusionCounts& counts, Averaging averaging, const std::vector<double>& per_class,
                    std::vector<std::size_t> flagged) {
  MetricValue out;
  out.zero_denominator_classes = std::move(flagged);
  const std::size_t classes = per_class.size();
  switch (averaging) {
    case Averaging::kMacro: {
      double sum = 0.0;
      for (double v : per_class) sum += v;
      out.value = sum / static_cast<double>(classes);
      break;
    }
    case Averaging::kWeighted: {
      double sum = 0.0;
      for (std::size_t c = 0; c < classes; ++c) {
        sum += per_class[c] * static_cast<double>(recall_den(counts.per_class[c]));
      }
      out.value = sum / static_cast<double>(counts.total);
      break;
    }
    case Averaging::kPositiveClass:
      if (classes != 2) throw InputError("metrics: positive-class averaging needs exactly 2 classes");
      out.value = per_class[1];
      break;
  }
  return out;
}

std::vector<std::size_t> zero_classes(const ConfusionCounts& counts, ClassDenominator den) {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < counts.per_class.size(); ++c) {
    if (den(counts.per_class[c]) == 0) out.push_back(c);
  }
  return out;
}

}  // namespace

ConfusionCounts confusion(std::span<const std::uint32_t> predictions, std::span<const std::uint32_t> truths,
                          std::size_t num_classes) {
  if (predictions.size() != truths.size()) {
    throw InputError("confusion: " + std::to_string(predictions.size()) + " predictions vs " +
                     std::to_string(truths.size()) + " truths");
  }
  if (predictions.empty()) throw InputError("confusion: no examples");
  if (num_classes < 1) throw InputError("confusion: num_classes must be >= 1");

  ConfusionCounts out;
  out.per_class.resize(num_classes);
  out.total = predictions.size();
  // Accumulate TP/FP/FN, then TN falls out of the row identity.
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const std::uint32_t p = predictions[i];
    const std::uint32_t t = truths[i];
    if (p >= num_classes || t >= num_classes) {
      throw InputError("confusion: label out of range at position " + std::to_string(i));
    }
    if (p == t) {
      ++out.per_class[p].tp;
    } else {
      ++out.per_class[p].fp;
      ++out.per_class[t].fn;
    }
  }
  for (ClassCounts& c : out.per_class) c.tn = out.total - c.tp - c.fp - c.fn;
  return out;
}

ConfusionCounts binary_counts(std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
  ConfusionCounts out;
  out.total = tp + tn + fp + fn;
  out.per_class = {ClassCounts{tn, tp, fn, fp}, ClassCounts{tp, tn, fp, fn}};
  return out;
}

std::string_view averaging_name(Averaging averaging) {
  switch (averaging) {
    case Averaging::kMacro:
      return "macro";
    case Averaging::kWeighted:
      return "weighted";
    case Averaging::kPositiveClass:
      return "positive-class";
  }
  return "unknown";
}

double accuracy(const ConfusionCounts& counts) {
  require_nonempty(counts);
  std::uint64_t correct = 0;
  for (const ClassCounts& c : counts.per_class) correct += c.tp;
  return ratio(correct, counts.total);
}

std::vector<double> per_class_precision(const ConfusionCounts& counts) {
  std::vector<double> out;
  for (const ClassCounts& c : counts.per_class) out.push_back(ratio(c.tp, precision_den(c)));
  return out;
}

std::vector<double> per_class_recall(const ConfusionCounts& counts) {
  std::vector<double> out;
  for (const ClassCounts& c : counts.per_class) out.push_back(ratio(c.tp, recall_den(c)));
  return out;
}

std::vector<double> per_class_f1(const ConfusionCounts& counts) {
  const auto p = per_class_precision(counts);
  const auto r = per_class_recall(counts);
  std::vector<double> out(p.size());
  for (std::size_t c = 0; c < p.size(); ++c) out[c] = harmonic(p[c], r[c]);
  return out;
}

MetricValue precision(const ConfusionCounts& counts, Averaging averaging) {
  require_nonempty(counts);
  return average(counts, averaging, per_class_precision(counts), zero_classes(counts, precision_den));
}

MetricValue recall(const ConfusionCounts& counts, Averaging averaging) {
  require_nonempty(counts);
  return average(counts, averaging, per_class_recall(counts), zero_classes(counts, recall_den));
}

MetricValue f1(const ConfusionCounts& counts, Averaging averaging) {
  require_nonempty(counts);
  const auto p = per_class_precision(counts);
  const auto r = per_class_recall(counts);
  std::vector<std::size_t> flagged;
  for (std::size_t c = 0; c < p.size(); ++c) {
    if (p[c] + r[c] == 0.0) flagged.push_back(c);
  }
  return average(counts, averaging, per_class_f1(counts), std::move(flagged));
}

Summary summarize(const ConfusionCounts& counts, Averaging averaging) {
  return {accuracy(counts), precision(counts, averaging).value, recall(counts, averaging).value,
          f1(counts, averaging).value};
}

}  // namespace pfl::metrics
