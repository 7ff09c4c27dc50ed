#pragma once

#include <span>
#include <string>
#include <vector>

#include "attrboost/types.hpp"

namespace attrboost {

struct StumpSearchResult {
    Stump stump;
    double weighted_error = 0.0;  // over normalized weights
    double edge = 0.0;            // 0.5 - weighted_error
};

/// Weighted accuracy minus 0.5 of a prediction vector. Weights need not be
/// normalized; the formula divides by their sum.
double edge(std::span<const int> predictions, std::span<const int> labels,
            std::span<const double> weights);

/// Exhaustive search over (attribute, polarity) candidates for the pair
/// minimizing weighted 0/1 error. Ties break to the lowest column index,
/// then polarity +1, making the argmin unique.
StumpSearchResult train_stump(const AttributeMatrix& matrix,
                              const std::vector<std::string>& candidate_attr_ids,
                              std::span<const int> labels, const WeightVector& weights);

}  // namespace attrboost
