#include "pfl/model/optimizer.hpp"

#include <cmath>
#include <string>

#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

namespace pfl {

std::string_view optimizer_kind_name(OptimizerKind kind) { return kind == OptimizerKind::kSgd ? "sgd" : "adam"; }

OptimizerState OptimizerState::make(OptimizerKind kind, double learning_rate, std::size_t param_count) {
  if (!(learning_rate > 0.0)) throw ConfigError("optimizer: learning rate must be positive");
  OptimizerState state;
  state.kind = kind;
  state.learning_rate = learning_rate;
  if (kind == OptimizerKind::kAdam) {
    state.first_moment.assign(param_count, 0.0);
    state.second_moment.assign(param_count, 0.0);
  }
  return state;
}

void optimizer_step(OptimizerState& state, ParamVector& params, const ParamVector& grad) {
  if (params.size() != grad.size()) {
    throw ConfigError("optimizer_step: params have " + std::to_string(params.size()) + " entries, gradient " +
                      std::to_string(grad.size()));
  }
  ++state.step;
  if (state.kind == OptimizerKind::kSgd) {
    kernels::axpy(-state.learning_rate, grad.span(), params.span());
    return;
  }
  if (state.first_moment.size() != params.size() || state.second_moment.size() != params.size()) {
    throw ConfigError("optimizer_step: Adam moments do not match the parameter count");
  }
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(state.beta1, t);
  const double bias2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    double& m = state.first_moment[i];
    double& v = state.second_moment[i];
    m = state.beta1 * m + (1.0 - state.beta1) * grad[i];
    v = state.beta2 * v + (1.0 - state.beta2) * grad[i] * grad[i];
    const double m_hat = m / bias1;
    const double v_hat = v / bias2;
    params[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

}  // namespace pfl
