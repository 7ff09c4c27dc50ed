#include "attrboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "attrboost/learner.hpp"
#include "attrboost/model_io.hpp"
#include "attrboost/sampling.hpp"

namespace attrboost {

double alpha_from_edge(double gamma, double clamp) {
    if (std::abs(gamma) > 0.5 + 1e-12)
        throw DataError("alpha: |gamma| exceeds 0.5");
    if (!(clamp > 0.0 && clamp < 0.5)) throw ConfigError("alpha: clamp must be in (0, 0.5)");
    const double g = std::copysign(std::min(std::abs(gamma), clamp), gamma);
    return 0.5 * std::log((0.5 + g) / (0.5 - g));
}

WeightVector update_weights(std::span<const double> margins) {
    std::vector<double> raw(margins.size());
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (!std::isfinite(margins[i])) throw DataError("update_weights: non-finite margin");
        raw[i] = 1.0 / (1.0 + std::exp(margins[i]));
    }
    return WeightVector::normalized(std::move(raw));
}

std::string trace_to_json(const TrainTrace& trace) {
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& rec : trace.iterations) {
        iterations.push_back({{"t", rec.t},
                              {"sampled_ids", rec.sampled_ids},
                              {"attr_ids", rec.attr_ids},
                              {"gamma", rec.gamma},
                              {"alpha", rec.alpha},
                              {"train_accuracy", rec.train_accuracy},
                              {"weight_entropy", rec.weight_entropy}});
    }
    return nlohmann::json{{"schema_version", 1}, {"iterations", iterations}}.dump(2);
}

void save_trace(const TrainTrace& trace, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write trace file '" + path + "'");
    out << trace_to_json(trace) << '\n';
}

namespace {

int sign_or_tie(double margin, int tie_prediction) {
    if (margin > 0.0) return +1;
    if (margin < 0.0) return -1;
    return tie_prediction;
}

}  // namespace

TrainResult train(const Dataset& dataset, OracleBackend& backend, const TrainConfig& config,
                  const OracleConfig& oracle_cfg, LabelCache& cache, QueryLedger& ledger,
                  const TrainObserver& observer) {
    config.validate();
    oracle_cfg.validate();

    const std::size_t n = dataset.size();
    std::vector<int> labels(n);
    std::vector<std::string> instance_ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = dataset.at(i).label;
        instance_ids[i] = dataset.at(i).id;
    }

    Rng master(config.seed);
    WeightVector weights = WeightVector::uniform(n);
    std::vector<double> scores(n, 0.0);  // H_t(x_i)
    AttributeMatrix matrix(instance_ids);

    TrainResult result;
    result.model.config_snapshot = config;
    std::unordered_map<std::string, std::size_t> known_attrs;  // attr_id -> dictionary index
    std::vector<std::string> all_attr_ids;

    for (int t = 1; t <= config.T; ++t) {
        ledger.begin_iteration(t);

        FilterState state(config.delta, config.epsilon, master.split(static_cast<std::uint64_t>(t)));
        const std::size_t r_max =
            static_cast<std::size_t>(config.r_max_factor) * static_cast<std::size_t>(t);
        const SampleSet sample_set = build_sample_set(dataset, weights, config.q, state, r_max);

        std::vector<AttributeDefinition> fresh =
            define_attributes(sample_set, config.k, t, backend, oracle_cfg, ledger);

        // Re-emitted attributes keep their original dictionary entry; their
        // cached columns are reused and no cell is labeled twice.
        std::vector<std::string> round_attr_ids;
        for (auto& def : fresh) {
            round_attr_ids.push_back(def.attr_id);
            if (!known_attrs.contains(def.attr_id)) {
                known_attrs.emplace(def.attr_id, result.model.attributes.size());
                result.model.attributes.push_back(def);
                all_attr_ids.push_back(def.attr_id);
            }
        }

        label_instances(dataset.instances(), fresh, backend, oracle_cfg, cache, matrix, ledger);

        const std::vector<std::string>& candidates =
            config.cumulative_features ? all_attr_ids : round_attr_ids;
        const StumpSearchResult found = train_stump(matrix, candidates, labels, weights);

        const std::vector<int> votes = matrix.column_votes(found.stump.attr_id);
        std::vector<int> predictions(n);
        for (std::size_t i = 0; i < n; ++i)
            predictions[i] = found.stump.polarity * votes[i];

        const double gamma = edge(predictions, labels, weights.values());
        if (gamma < -1e-12)
            throw DataError("iteration " + std::to_string(t) +
                            ": negative edge from polarity-complete search");
        const double alpha = alpha_from_edge(gamma, config.gamma_clamp);

        std::vector<double> unnorm_before(n), unnorm_after(n), margins(n);
        for (std::size_t i = 0; i < n; ++i) {
            unnorm_before[i] = 1.0 / (1.0 + std::exp(labels[i] * scores[i]));
            scores[i] += alpha * predictions[i];
            margins[i] = labels[i] * scores[i];
            unnorm_after[i] = 1.0 / (1.0 + std::exp(margins[i]));
        }
        weights = update_weights(margins);

        std::size_t correct = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (sign_or_tie(scores[i], config.tie_prediction) == labels[i]) ++correct;

        result.model.rounds.push_back(BoostRound{found.stump, alpha});

        IterationRecord rec;
        rec.t = t;
        for (const auto& inst : sample_set.positives) rec.sampled_ids.push_back(inst.id);
        for (const auto& inst : sample_set.negatives) rec.sampled_ids.push_back(inst.id);
        rec.attr_ids = round_attr_ids;
        rec.gamma = gamma;
        rec.alpha = alpha;
        rec.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
        rec.weight_entropy = weights.entropy();
        result.trace.iterations.push_back(std::move(rec));

        if (observer) {
            IterationDebug dbg;
            dbg.t = t;
            dbg.alpha = alpha;
            dbg.stump_predictions = predictions;
            dbg.labels = labels;
            dbg.unnormalized_before = unnorm_before;
            dbg.unnormalized_after = unnorm_after;
            dbg.normalized_after = weights.values();
            observer(dbg);
        }
    }

    result.model.validate();
    return result;
}

Prediction predict(const EnsembleModel& model, const Instance& instance,
                   OracleBackend& backend, const OracleConfig& oracle_cfg, LabelCache& cache,
                   QueryLedger& ledger) {
    if (model.rounds.empty()) throw DataError("predict: model has no rounds");

    std::vector<AttributeDefinition> needed;
    for (const auto& attr_id : model.referenced_attr_ids())
        needed.push_back(model.attribute(attr_id));

    AttributeMatrix matrix({instance.id});
    label_instances({instance}, needed, backend, oracle_cfg, cache, matrix, ledger);

    double margin = 0.0;
    for (const auto& round : model.rounds)
        margin += round.alpha * round.stump.predict(matrix.get(instance.id, round.stump.attr_id));
    return Prediction{sign_or_tie(margin, model.config_snapshot.tie_prediction), margin};
}

std::vector<Prediction> predict_batch(const EnsembleModel& model,
                                      const std::vector<Instance>& instances,
                                      OracleBackend& backend, const OracleConfig& oracle_cfg,
                                      LabelCache& cache, QueryLedger& ledger) {
    if (model.rounds.empty()) throw DataError("predict: model has no rounds");
    std::vector<AttributeDefinition> needed;
    for (const auto& attr_id : model.referenced_attr_ids())
        needed.push_back(model.attribute(attr_id));

    std::vector<std::string> ids;
    for (const auto& inst : instances) ids.push_back(inst.id);
    AttributeMatrix matrix(ids);
    label_instances(instances, needed, backend, oracle_cfg, cache, matrix, ledger);

    std::vector<Prediction> out;
    out.reserve(instances.size());
    for (const auto& inst : instances) {
        double margin = 0.0;
        for (const auto& round : model.rounds)
            margin += round.alpha * round.stump.predict(matrix.get(inst.id, round.stump.attr_id));
        out.push_back(Prediction{sign_or_tie(margin, model.config_snapshot.tie_prediction), margin});
    }
    return out;
}

}  // namespace attrboost
