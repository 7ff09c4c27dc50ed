#include "attrboost/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace attrboost {

FilterState::FilterState(double delta_t, double epsilon, Rng rng)
    : delta_t(delta_t), epsilon(epsilon), rng(rng) {
    if (!(delta_t > 0.0 && delta_t < 1.0)) throw ConfigError("delta_t must be in (0,1)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in (0,1)");
}

std::size_t filter_budget(std::size_t n, double delta_t, double epsilon, std::size_t r) {
    const double delta_prime = delta_t / (static_cast<double>(r) * static_cast<double>(r + 1));
    const double bound = std::ceil((2.0 / epsilon) * std::log(1.0 / delta_prime));
    if (bound >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(bound);
}

std::optional<FilterDraw> filter(const Dataset& dataset, const WeightVector& weights,
                                 FilterState& state) {
    const std::size_t n = dataset.size();
    if (n == 0) throw DataError("filter: empty dataset");
    if (weights.size() != n) throw DataError("filter: weight/dataset size mismatch");
    if (std::abs(weights.sum() - 1.0) > 1e-6)
        throw DataError("filter: weights are not normalized");

    state.r += 1;
    const std::size_t budget = filter_budget(n, state.delta_t, state.epsilon, state.r);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    state.rng.shuffle(perm);

    state.last_trials = 0;
    for (std::size_t i = 0; i < budget; ++i) {
        ++state.last_trials;
        const std::size_t idx = perm[i];
        if (state.rng.uniform() < weights[idx])
            return FilterDraw{idx, dataset.at(idx).label};
    }
    return std::nullopt;
}

namespace {

/// Weighted sampling without replacement from one class, used only on
/// FILTER stall. `need` instances with label `want` that are not in `taken`.
void direct_fill(const Dataset& dataset, const WeightVector& weights, int want,
                 std::size_t need, std::unordered_set<std::size_t>& taken,
                 std::vector<Instance>& out, Rng& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (dataset.at(i).label == want && !taken.contains(i)) candidates.push_back(i);
    if (candidates.size() < need)
        throw SamplingStalledError("not enough distinct instances of class " +
                                       std::to_string(want) + " to fill sample set",
                                   0, 0);
    for (std::size_t picked = 0; picked < need; ++picked) {
        double total = 0.0;
        for (std::size_t c : candidates) total += weights[c];
        std::size_t chosen = candidates.back();
        if (total > 0.0) {
            double u = rng.uniform() * total;
            for (std::size_t c : candidates) {
                u -= weights[c];
                if (u <= 0.0) {
                    chosen = c;
                    break;
                }
            }
        } else {
            chosen = candidates[rng.bounded(candidates.size())];
        }
        taken.insert(chosen);
        out.push_back(dataset.at(chosen));
        candidates.erase(std::find(candidates.begin(), candidates.end(), chosen));
    }
}

}  // namespace

SampleSet build_sample_set(const Dataset& dataset, const WeightVector& weights, int q,
                           FilterState& state, std::size_t r_max) {
    if (q < 1) throw ConfigError("build_sample_set: q must be >= 1");
    const std::size_t qq = static_cast<std::size_t>(q);
    if (dataset.positives() < qq || dataset.negatives() < qq)
        throw DataError("build_sample_set: dataset has fewer than q instances of a class");

    SampleSet set;
    std::unordered_set<std::size_t> taken;
    while (set.positives.size() < qq || set.negatives.size() < qq) {
        if (state.r >= r_max) {
            // Stall guard: fill whatever is missing by direct weighted
            // sampling without replacement inside the starved class.
            if (set.positives.size() < qq)
                direct_fill(dataset, weights, +1, qq - set.positives.size(), taken,
                            set.positives, state.rng);
            if (set.negatives.size() < qq)
                direct_fill(dataset, weights, -1, qq - set.negatives.size(), taken,
                            set.negatives, state.rng);
            break;
        }
        auto draw = filter(dataset, weights, state);
        if (!draw) continue;
        if (taken.contains(draw->index)) continue;  // without replacement within one iteration
        if (draw->label == +1 && set.positives.size() < qq) {
            taken.insert(draw->index);
            set.positives.push_back(dataset.at(draw->index));
        } else if (draw->label == -1 && set.negatives.size() < qq) {
            taken.insert(draw->index);
            set.negatives.push_back(dataset.at(draw->index));
        }
    }
    return set;
}

}  // namespace attrboost
