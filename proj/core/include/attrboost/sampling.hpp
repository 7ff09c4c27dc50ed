#pragma once

#include <optional>
#include <vector>

#include "attrboost/rng.hpp"
#include "attrboost/types.hpp"

namespace attrboost {

/// Serial state threaded through successive filter() calls within one
/// boosting iteration. r counts calls; the per-call trial budget shrinks
/// as r grows (delta' = delta / (r(r+1))).
struct FilterState {
    FilterState(double delta_t, double epsilon, Rng rng);

    std::size_t r = 0;
    double delta_t;
    double epsilon;
    Rng rng;

    /// Acceptance trials evaluated by the most recent filter() call.
    std::size_t last_trials = 0;
};

struct FilterDraw {
    std::size_t index;  // position in the dataset
    int label;
};

/// One rejection-sampling pass: permute the dataset, scan up to
/// min(N, ceil((2/eps) ln(1/delta'))) items, accept item i with
/// probability w'_i. Returns nullopt when no item is accepted in budget.
std::optional<FilterDraw> filter(const Dataset& dataset, const WeightVector& weights,
                                 FilterState& state);

/// Trial budget for the given call number (before-the-draw, r >= 1).
std::size_t filter_budget(std::size_t n, double delta_t, double epsilon, std::size_t r);

struct SampleSet {
    std::vector<Instance> positives;
    std::vector<Instance> negatives;
};

/// Fills both sides to exactly q via repeated filter() calls, skipping
/// duplicates and draws for an already-full side. If state.r reaches
/// r_max first, falls back to direct weighted sampling without
/// replacement from each starved class (weights renormalized within the
/// class) so progress is guaranteed.
SampleSet build_sample_set(const Dataset& dataset, const WeightVector& weights, int q,
                           FilterState& state, std::size_t r_max);

}  // namespace attrboost
