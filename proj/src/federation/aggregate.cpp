#include "pfl/federation/aggregate.hpp"

#include <string>

#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

namespace pfl::federation {
namespace {

void check_models(std::span<const ParamVector> models) {
  if (models.empty()) throw InputError("fed_avg: no models");
  const std::size_t dim = models.front().size();
  for (std::size_t k = 1; k < models.size(); ++k) {
    if (models[k].size() != dim) {
      throw InputError("fed_avg: model " + std::to_string(k) + " has " + std::to_string(models[k].size()) +
                       " parameters, expected " + std::to_string(dim));
    }
  }
}

}  // namespace

ParamVector fed_avg(std::span<const ParamVector> models) {
  check_models(models);
  ParamVector sum(models.front().size());
  for (const ParamVector& m : models) kernels::add(m.span(), sum.span());
  for (double& v : sum) v /= static_cast<double>(models.size());
  return sum;
}

ParamVector weighted_average(std::span<const ParamVector> models, std::span<const double> weights) {
  check_models(models);
  if (weights.size() != models.size()) throw InputError("weighted_average: one weight per model required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InputError("weighted_average: weights must be non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw InputError("weighted_average: weights sum to zero");
  ParamVector sum(models.front().size());
  for (std::size_t k = 0; k < models.size(); ++k) kernels::axpy(weights[k] / total, models[k].span(), sum.span());
  return sum;
}

}  // namespace pfl::federation
