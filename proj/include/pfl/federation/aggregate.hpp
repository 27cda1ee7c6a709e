#pragma once

#include <span>

#include "pfl/model/param_vector.hpp"

namespace pfl::federation {

// Coordinate-wise arithmetic mean (unweighted FedAvg). Throws InputError on
// an empty list or ragged lengths.
ParamVector fed_avg(std::span<const ParamVector> models);

// sum_k w_k m_k / sum_k w_k. Weights must be non-negative with a positive sum.
ParamVector weighted_average(std::span<const ParamVector> models, std::span<const double> weights);

}  // namespace pfl::federation
