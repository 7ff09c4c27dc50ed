#pragma once

#include <memory>
#include <string>
#include <vector>

#include "attrboost/boosting.hpp"
#include "attrboost/scripted_oracle.hpp"
#include "attrboost/types.hpp"

namespace attrboost {

/// Hidden-world recipe: D binary dims per instance, label = +1 iff the
/// selected dims sum to at least theta, answers flipped with rate eta.
struct SynthWorld {
    int D = 8;
    std::vector<int> rule_dims = {0, 1, 2};
    int theta = 2;
    double eta = 0.0;
    std::uint64_t seed = 1;

    void validate() const;
};

struct SynthData {
    Dataset dataset;
    std::shared_ptr<ScriptedOracle> oracle;
};

/// Draws n instances with i.i.d. Bernoulli(1/2) hidden bits, labels them by
/// the world rule, and binds the bits into a scripted oracle. Regenerates
/// (bounded) until labels are balanced within +-10% of 50/50.
SynthData generate(const SynthWorld& world, int n);

/// Train and held-out sets from one world; the shared oracle answers both.
struct SynthSplit {
    Dataset train;
    Dataset test;
    std::shared_ptr<ScriptedOracle> oracle;
};
SynthSplit generate_split(const SynthWorld& world, int n_train, int n_test);

struct ExperimentReport {
    double mean_acc = 0.0;
    double std_acc = 0.0;  // sample (n-1) standard deviation
    int trials = 0;
    long define_calls = 0;
    long label_calls = 0;
    double wall_ms = 0.0;

    /// include_timing=false yields the deterministic byte-comparable form.
    std::string to_json(bool include_timing = true) const;
};

/// `trials` independent seeded train/predict cycles; per-trial seeds (data
/// and training) derive from config.seed, so the statistical fields of the
/// report are deterministic given the master seed.
ExperimentReport run_experiment(const SynthWorld& world, int n_train, int n_test,
                                const TrainConfig& config, const OracleConfig& oracle_cfg,
                                int trials);

}  // namespace attrboost
