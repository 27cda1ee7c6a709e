#include "pfl/model/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfl/crypto/rng.hpp"
#include "pfl/errors.hpp"
#include "pfl/kernels/kernels.hpp"

namespace pfl {
namespace {

struct DenseBlock {
  std::size_t weights = 0;  // offset of W[out x in]
  std::size_t bias = 0;     // offset of b[out]
  std::size_t in = 0;
  std::size_t out = 0;

  template <typename Span>
  auto weight_row(Span params, std::size_t r) const {
    return params.subspan(weights + r * in, in);
  }
  template <typename Span>
  auto bias_span(Span params) const {
    return params.subspan(bias, out);
  }
};

struct Layout {
  DenseBlock hidden;  // mlp only
  DenseBlock output;
  bool has_hidden = false;
};

Layout layout_of(const ModelSpec& spec) {
  Layout l;
  if (spec.kind == ModelKind::kLogistic) {
    l.output = {0, spec.num_classes * spec.input_dim, spec.input_dim, spec.num_classes};
    return l;
  }
  const std::size_t h = spec.hidden_dim;
  l.has_hidden = true;
  l.hidden = {0, h * spec.input_dim, spec.input_dim, h};
  const std::size_t w2 = h * spec.input_dim + h;
  l.output = {w2, w2 + spec.num_classes * h, h, spec.num_classes};
  return l;
}

void check_shapes(const ModelSpec& spec, const ParamVector& params, std::size_t feature_cols) {
  spec.validate();
  if (params.size() != spec.param_count()) {
    throw ConfigError("model expects " + std::to_string(spec.param_count()) + " parameters, got " +
                      std::to_string(params.size()));
  }
  if (feature_cols != spec.input_dim) {
    throw ConfigError("model expects input width " + std::to_string(spec.input_dim) + ", got " +
                      std::to_string(feature_cols));
  }
}

// out[r] = dot(W_r, x) + b_r
void dense(const DenseBlock& block, std::span<const double> params, std::span<const double> x,
           std::span<double> out) {
  const auto bias = block.bias_span(params);
  for (std::size_t r = 0; r < block.out; ++r) out[r] = kernels::dot(block.weight_row(params, r), x) + bias[r];
}

// In-place softmax; returns log-sum-exp of the input logits.
double softmax_inplace(std::span<double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (double& v : logits) v /= sum;
  return peak + std::log(sum);
}

// Fills hidden activations (mlp) and the output logits for one row.
void logits_row(const Layout& layout, std::span<const double> params, std::span<const double> x,
                std::span<double> hidden, std::span<double> logits) {
  if (layout.has_hidden) {
    dense(layout.hidden, params, x, hidden);
    for (double& v : hidden) v = std::tanh(v);
    dense(layout.output, params, hidden, logits);
  } else {
    dense(layout.output, params, x, logits);
  }
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) { return kind == ModelKind::kLogistic ? "logistic" : "mlp"; }

std::size_t ModelSpec::param_count() const {
  if (kind == ModelKind::kLogistic) return num_classes * input_dim + num_classes;
  return hidden_dim * input_dim + hidden_dim + num_classes * hidden_dim + num_classes;
}

void ModelSpec::validate() const {
  if (input_dim < 1) throw ConfigError("model: input_dim must be >= 1");
  if (num_classes < 2) throw ConfigError("model: num_classes must be >= 2");
  if (kind == ModelKind::kMlp && hidden_dim < 1) throw ConfigError("model: mlp needs hidden_dim >= 1");
}

ParamVector init_params(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  ParamVector params(spec.param_count());
  if (spec.kind == ModelKind::kLogistic) return params;
  SeededRng rng(seed, stream_id({0x494e4954}));
  const Layout layout = layout_of(spec);
  for (const DenseBlock* block : {&layout.hidden, &layout.output}) {
    const double limit = std::sqrt(6.0 / static_cast<double>(block->in + block->out));
    for (std::size_t i = 0; i < block->in * block->out; ++i) {
      params[block->weights + i] = limit * (2.0 * rng.uniform() - 1.0);
    }
  }
  return params;
}

Matrix forward(const ModelSpec& spec, const ParamVector& params, const Matrix& features) {
  check_shapes(spec, params, features.cols);
  const Layout layout = layout_of(spec);
  Matrix probs(features.rows, spec.num_classes);
  std::vector<double> hidden(spec.hidden_dim);
  for (std::size_t i = 0; i < features.rows; ++i) {
    logits_row(layout, params.span(), features.row(i), hidden, probs.row(i));
    softmax_inplace(probs.row(i));
  }
  return probs;
}

std::vector<std::uint32_t> predict(const ModelSpec& spec, const ParamVector& params, const Matrix& features) {
  const Matrix probs = forward(spec, params, features);
  std::vector<std::uint32_t> out(probs.rows);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    const auto row = probs.row(i);
    out[i] = static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

LossAndGradient loss_and_gradient(const ModelSpec& spec, const ParamVector& params, const Dataset& data,
                                  std::span<const std::size_t> rows) {
  if (rows.empty()) throw InputError("loss_and_gradient: empty batch");
  check_shapes(spec, params, data.input_dim());
  const Layout layout = layout_of(spec);
  const auto p = params.span();

  LossAndGradient out{0.0, ParamVector(params.size())};
  const auto g = out.gradient.span();
  std::vector<double> hidden(spec.hidden_dim);
  std::vector<double> hidden_grad(spec.hidden_dim);
  std::vector<double> probs(spec.num_classes);

  for (std::size_t row : rows) {
    const auto x = data.features.row(row);
    const std::uint32_t y = data.labels.at(row);
    if (y >= spec.num_classes) throw InputError("loss_and_gradient: label out of range");
    logits_row(layout, p, x, hidden, probs);
    const double true_logit = probs[y];
    out.loss += softmax_inplace(probs) - true_logit;

    probs[y] -= 1.0;  // dL/dlogits
    const DenseBlock& o = layout.output;
    const std::span<const double> output_input = layout.has_hidden ? std::span<const double>(hidden) : x;
    auto output_bias = o.bias_span(g);
    for (std::size_t c = 0; c < o.out; ++c) {
      kernels::axpy(probs[c], output_input, o.weight_row(g, c));
      output_bias[c] += probs[c];
    }
    if (!layout.has_hidden) continue;

    std::fill(hidden_grad.begin(), hidden_grad.end(), 0.0);
    for (std::size_t c = 0; c < o.out; ++c) kernels::axpy(probs[c], o.weight_row(p, c), hidden_grad);
    const DenseBlock& h = layout.hidden;
    auto hidden_bias = h.bias_span(g);
    for (std::size_t j = 0; j < h.out; ++j) {
      const double dz = hidden_grad[j] * (1.0 - hidden[j] * hidden[j]);
      kernels::axpy(dz, x, h.weight_row(g, j));
      hidden_bias[j] += dz;
    }
  }

  const double inv = 1.0 / static_cast<double>(rows.size());
  out.loss *= inv;
  kernels::scale(inv, g);
  return out;
}

LossAndGradient loss_and_gradient(const ModelSpec& spec, const ParamVector& params, const Dataset& batch) {
  std::vector<std::size_t> rows(batch.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return loss_and_gradient(spec, params, batch, rows);
}

double mean_loss(const ModelSpec& spec, const ParamVector& params, const Dataset& data) {
  if (data.empty()) throw InputError("mean_loss: empty dataset");
  check_shapes(spec, params, data.input_dim());
  const Layout layout = layout_of(spec);
  std::vector<double> hidden(spec.hidden_dim);
  std::vector<double> logits(spec.num_classes);
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    logits_row(layout, params.span(), data.features.row(i), hidden, logits);
    const double true_logit = logits[data.labels[i]];
    total += softmax_inplace(logits) - true_logit;
  }
  return total / static_cast<double>(data.size());
}

}  // namespace pfl
