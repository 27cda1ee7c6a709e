#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "pfl/model/param_vector.hpp"

namespace pfl {

enum class OptimizerKind { kSgd, kAdam };

std::string_view optimizer_kind_name(OptimizerKind kind);

struct OptimizerState {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> first_moment;   // adam only
  std::vector<double> second_moment;  // adam only
  std::uint64_t step = 0;

  static OptimizerState make(OptimizerKind kind, double learning_rate, std::size_t param_count);
};

// One SGD or bias-corrected Adam update of `params` in place; advances the
// step counter. Throws ConfigError when shapes disagree.
void optimizer_step(OptimizerState& state, ParamVector& params, const ParamVector& grad);

}  // namespace pfl
