#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "attrboost/label_cache.hpp"
#include "attrboost/oracle.hpp"
#include "attrboost/types.hpp"

namespace attrboost {

/// Weak-classifier confidence: 0.5 ln((0.5+g)/(0.5-g)) with |g| clamped
/// to keep the value finite for perfect stumps.
double alpha_from_edge(double gamma, double clamp);

/// Logistic reweighting: unnormalized w_i = 1/(1+exp(margin_i)), then
/// normalized to sum 1.
WeightVector update_weights(std::span<const double> margins);

struct IterationRecord {
    int t = 0;
    std::vector<std::string> sampled_ids;  // S_F member ids, positives first
    std::vector<std::string> attr_ids;     // F_t
    double gamma = 0.0;
    double alpha = 0.0;
    double train_accuracy = 0.0;  // of the ensemble through round t
    double weight_entropy = 0.0;  // of w^{t+1}
};

struct TrainTrace {
    std::vector<IterationRecord> iterations;
};

std::string trace_to_json(const TrainTrace& trace);
void save_trace(const TrainTrace& trace, const std::string& path);

/// Per-iteration internals surfaced for invariant checking; not part of
/// any serialized artifact.
struct IterationDebug {
    int t = 0;
    double alpha = 0.0;
    std::span<const int> stump_predictions;
    std::span<const int> labels;
    std::span<const double> unnormalized_before;  // 1/(1+exp(y H_{t-1}))
    std::span<const double> unnormalized_after;   // 1/(1+exp(y H_t))
    std::span<const double> normalized_after;
};

using TrainObserver = std::function<void(const IterationDebug&)>;

struct TrainResult {
    EnsembleModel model;
    TrainTrace trace;
};

/// Runs the full adaptive loop for config.T rounds:
/// sample -> define -> label -> stump -> alpha -> ensemble update ->
/// logistic reweighting -> normalize. All randomness derives from
/// config.seed.
TrainResult train(const Dataset& dataset, OracleBackend& backend, const TrainConfig& config,
                  const OracleConfig& oracle_cfg, LabelCache& cache, QueryLedger& ledger,
                  const TrainObserver& observer = {});

struct Prediction {
    int label = 0;
    double margin = 0.0;
};

/// Labels the instance on every attribute referenced by the model's stumps
/// (one batched oracle call when uncached), then takes the sign of the
/// alpha-weighted vote. Margin exactly 0 falls to config.tie_prediction.
Prediction predict(const EnsembleModel& model, const Instance& instance,
                   OracleBackend& backend, const OracleConfig& oracle_cfg, LabelCache& cache,
                   QueryLedger& ledger);

/// Batched variant; instances are labeled independently (and concurrently
/// up to oracle_cfg.parallelism).
std::vector<Prediction> predict_batch(const EnsembleModel& model,
                                      const std::vector<Instance>& instances,
                                      OracleBackend& backend, const OracleConfig& oracle_cfg,
                                      LabelCache& cache, QueryLedger& ledger);

}  // namespace attrboost
