#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pfl/model/dataset.hpp"
#include "pfl/model/param_vector.hpp"

namespace pfl {

enum class ModelKind { kLogistic, kMlp };

std::string_view model_kind_name(ModelKind kind);

// Parameter layout (row-major blocks, in order):
//   logistic: W[C x D], b[C]
//   mlp:      W1[H x D], b1[H], W2[C x H], b2[C], hidden activation tanh
struct ModelSpec {
  ModelKind kind = ModelKind::kLogistic;
  std::size_t input_dim = 1;
  std::size_t num_classes = 2;
  std::size_t hidden_dim = 0;

  std::size_t param_count() const;
  // Throws ConfigError on input_dim < 1, C < 2 or an MLP without hidden units.
  void validate() const;
};

// Logistic weights start at zero; MLP weights use a seeded Glorot-uniform
// draw so the hidden units are not symmetric.
ParamVector init_params(const ModelSpec& spec, std::uint64_t seed);

// Row-wise softmax class probabilities.
Matrix forward(const ModelSpec& spec, const ParamVector& params, const Matrix& features);

std::vector<std::uint32_t> predict(const ModelSpec& spec, const ParamVector& params, const Matrix& features);

struct LossAndGradient {
  double loss = 0.0;  // mean cross-entropy
  ParamVector gradient;
};

// Throws InputError on an empty batch, ConfigError on shape mismatches.
LossAndGradient loss_and_gradient(const ModelSpec& spec, const ParamVector& params, const Dataset& batch);
// Same, restricted to the given rows of `data`.
LossAndGradient loss_and_gradient(const ModelSpec& spec, const ParamVector& params, const Dataset& data,
                                  std::span<const std::size_t> rows);

double mean_loss(const ModelSpec& spec, const ParamVector& params, const Dataset& data);

}  // namespace pfl
