#include "attrboost/learner.hpp"

#include <cmath>

namespace attrboost {

double edge(std::span<const int> predictions, std::span<const int> labels,
            std::span<const double> weights) {
    if (predictions.size() != labels.size() || labels.size() != weights.size())
        throw DataError("edge: length mismatch");
    double correct = 0.0, total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (weights[i] < 0.0) throw DataError("edge: negative weight");
        total += weights[i];
        if (predictions[i] == labels[i]) correct += weights[i];
    }
    if (!(total > 0.0)) throw DataError("edge: weights sum to zero");
    return correct / total - 0.5;
}

StumpSearchResult train_stump(const AttributeMatrix& matrix,
                              const std::vector<std::string>& candidate_attr_ids,
                              std::span<const int> labels, const WeightVector& weights) {
    if (candidate_attr_ids.empty()) throw DataError("train_stump: no candidate columns");
    if (labels.size() != matrix.rows() || weights.size() != matrix.rows())
        throw DataError("train_stump: label/weight/matrix size mismatch");
    if (std::abs(weights.sum() - 1.0) > 1e-6)
        throw DataError("train_stump: weights are not normalized");
    matrix.require_complete(candidate_attr_ids);

    bool have_best = false;
    StumpSearchResult best;
    for (const auto& attr_id : candidate_attr_ids) {
        const std::vector<int> votes = matrix.column_votes(attr_id);
        for (int polarity : {+1, -1}) {
            double err = 0.0;
            for (std::size_t i = 0; i < votes.size(); ++i)
                if (polarity * votes[i] != labels[i]) err += weights[i];
            if (!have_best || err < best.weighted_error) {
                best.stump = Stump{attr_id, polarity};
                best.weighted_error = err;
                best.edge = 0.5 - err;
                have_best = true;
            }
        }
    }
    return best;
}

}  // namespace attrboost
