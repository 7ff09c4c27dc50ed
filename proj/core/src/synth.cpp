#include "attrboost/synth.hpp"

#include <chrono>
#include <cmath>

#include <json.hpp>

#include "attrboost/model_io.hpp"
#include "attrboost/rng.hpp"

namespace attrboost {

void SynthWorld::validate() const {
    if (D < 1) throw ConfigError("synth world: D must be >= 1");
    if (!(eta >= 0.0 && eta < 0.5)) throw ConfigError("synth world: eta must be in [0, 0.5)");
    if (rule_dims.empty()) throw ConfigError("synth world: rule needs at least one dim");
    for (int d : rule_dims)
        if (d < 0 || d >= D) throw ConfigError("synth world: rule dim out of range");
    if (theta < 1 || theta > static_cast<int>(rule_dims.size()))
        throw ConfigError("synth world: theta must be in [1, |rule_dims|]");
}

namespace {

struct RawInstances {
    std::vector<Instance> instances;
    std::vector<std::vector<std::uint8_t>> bits;
};

RawInstances draw_batch(const SynthWorld& world, int n, Rng& rng, const std::string& prefix) {
    RawInstances out;
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint8_t> bits(world.D);
        for (int d = 0; d < world.D; ++d) bits[d] = (rng.next_u64() & 1) ? 1 : 0;
        int sum = 0;
        for (int d : world.rule_dims) sum += bits[d];
        Instance inst;
        inst.id = prefix + std::to_string(i);
        inst.media_ref = "synth://" + inst.id;
        inst.label = (sum >= world.theta) ? +1 : -1;
        out.instances.push_back(std::move(inst));
        out.bits.push_back(std::move(bits));
    }
    return out;
}

bool balanced(const std::vector<Instance>& instances) {
    std::size_t pos = 0;
    for (const auto& inst : instances)
        if (inst.label == +1) ++pos;
    const double frac = static_cast<double>(pos) / instances.size();
    return frac >= 0.4 && frac <= 0.6;
}

RawInstances draw_balanced(const SynthWorld& world, int n, Rng& rng, const std::string& prefix) {
    constexpr int kMaxAttempts = 200;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        RawInstances batch = draw_batch(world, n, rng, prefix);
        if (balanced(batch.instances)) return batch;
    }
    throw DataError("synth: could not draw a class-balanced batch; rule too skewed");
}

}  // namespace

SynthData generate(const SynthWorld& world, int n) {
    world.validate();
    if (n < 4) throw ConfigError("synth generate: n must be >= 4");
    Rng rng(world.seed);
    RawInstances batch = draw_balanced(world, n, rng, "syn-");
    auto oracle = std::make_shared<ScriptedOracle>(world.D, world.eta, world.seed);
    for (std::size_t i = 0; i < batch.instances.size(); ++i)
        oracle->bind(batch.instances[i].media_ref, batch.bits[i]);
    return SynthData{Dataset(std::move(batch.instances)), std::move(oracle)};
}

SynthSplit generate_split(const SynthWorld& world, int n_train, int n_test) {
    world.validate();
    if (n_train < 4 || n_test < 4) throw ConfigError("synth split: sizes must be >= 4");
    Rng rng(world.seed);
    Rng train_rng = rng.split(1);
    Rng test_rng = rng.split(2);
    RawInstances train = draw_balanced(world, n_train, train_rng, "trn-");
    RawInstances test = draw_balanced(world, n_test, test_rng, "tst-");
    auto oracle = std::make_shared<ScriptedOracle>(world.D, world.eta, world.seed);
    for (std::size_t i = 0; i < train.instances.size(); ++i)
        oracle->bind(train.instances[i].media_ref, train.bits[i]);
    for (std::size_t i = 0; i < test.instances.size(); ++i)
        oracle->bind(test.instances[i].media_ref, test.bits[i]);
    return SynthSplit{Dataset(std::move(train.instances)), Dataset(std::move(test.instances)),
                      std::move(oracle)};
}

std::string ExperimentReport::to_json(bool include_timing) const {
    std::string out = "{";
    out += "\"mean_acc\": " + format_double(mean_acc);
    out += ", \"std_acc\": " + format_double(std_acc);
    out += ", \"trials\": " + std::to_string(trials);
    out += ", \"define_calls\": " + std::to_string(define_calls);
    out += ", \"label_calls\": " + std::to_string(label_calls);
    if (include_timing) out += ", \"wall_ms\": " + format_double(wall_ms);
    out += "}";
    return out;
}

ExperimentReport run_experiment(const SynthWorld& world, int n_train, int n_test,
                                const TrainConfig& config, const OracleConfig& oracle_cfg,
                                int trials) {
    if (trials < 1) throw ConfigError("run_experiment: trials must be >= 1");
    world.validate();
    config.validate();

    const auto start = std::chrono::steady_clock::now();
    Rng master(config.seed);
    std::vector<double> accuracies;
    ExperimentReport report;
    report.trials = trials;

    for (int trial = 0; trial < trials; ++trial) {
        Rng trial_rng = master.split(static_cast<std::uint64_t>(trial) + 0x7e57);
        SynthWorld trial_world = world;
        trial_world.seed = trial_rng.next_u64();
        TrainConfig trial_config = config;
        trial_config.seed = trial_rng.next_u64();

        SynthSplit split = generate_split(trial_world, n_train, n_test);
        LabelCache cache;  // in-memory, per trial
        QueryLedger ledger;
        TrainResult trained;
        try {
            trained = train(split.train, *split.oracle, trial_config, oracle_cfg, cache, ledger);
        } catch (const Error& e) {
            throw Error("trial " + std::to_string(trial) + ": " + e.what());
        }

        const auto predictions =
            predict_batch(trained.model, split.test.instances(), *split.oracle, oracle_cfg,
                          cache, ledger);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < predictions.size(); ++i)
            if (predictions[i].label == split.test.at(i).label) ++correct;
        accuracies.push_back(static_cast<double>(correct) / predictions.size());

        report.define_calls += ledger.define_calls();
        report.label_calls += ledger.label_calls();
    }

    double mean = 0.0;
    for (double a : accuracies) mean += a;
    mean /= accuracies.size();
    double var = 0.0;
    if (accuracies.size() > 1) {
        for (double a : accuracies) var += (a - mean) * (a - mean);
        var /= (accuracies.size() - 1);
    }
    report.mean_acc = mean;
    report.std_acc = std::sqrt(var);
    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

}  // namespace attrboost
