// Microbenchmarks for the hot non-oracle paths: the rejection sampler,
// stump search, reweighting, and a full in-process training run.
#include <benchmark/benchmark.h>

#include <vector>

#include "attrboost/boosting.hpp"
#include "attrboost/learner.hpp"
#include "attrboost/sampling.hpp"
#include "attrboost/synth.hpp"

using namespace attrboost;

namespace {

Dataset make_dataset(int n) {
    std::vector<Instance> instances;
    for (int i = 0; i < n; ++i)
        instances.push_back({"i" + std::to_string(i), "mem://" + std::to_string(i),
                             i % 2 == 0 ? +1 : -1});
    return Dataset(std::move(instances));
}

WeightVector skewed_weights(int n) {
    std::vector<double> raw(n);
    for (int i = 0; i < n; ++i) raw[i] = 1.0 + (i % 7);
    return WeightVector::normalized(std::move(raw));
}

void BM_FilterDraw(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset ds = make_dataset(n);
    const WeightVector w = skewed_weights(n);
    Rng rng(1);
    long call = 0;
    for (auto _ : state) {
        FilterState fs(0.1, 0.1, rng.split(call++));
        benchmark::DoNotOptimize(filter(ds, w, fs));
    }
}
BENCHMARK(BM_FilterDraw)->Arg(200)->Arg(2000);

void BM_BuildSampleSet(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Dataset ds = make_dataset(n);
    const WeightVector w = skewed_weights(n);
    Rng rng(2);
    long call = 0;
    for (auto _ : state) {
        FilterState fs(0.1, 0.1, rng.split(call++));
        benchmark::DoNotOptimize(build_sample_set(ds, w, 10, fs, 1000));
    }
}
BENCHMARK(BM_BuildSampleSet)->Arg(200)->Arg(2000);

void BM_TrainStump(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int k = 10;
    Rng rng(3);
    std::vector<std::string> ids;
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) {
        ids.push_back("i" + std::to_string(i));
        labels[i] = rng.uniform() < 0.5 ? +1 : -1;
    }
    AttributeMatrix matrix(ids);
    std::vector<std::string> attrs;
    for (int c = 0; c < k; ++c) {
        const std::string attr = "a" + std::to_string(c);
        attrs.push_back(attr);
        matrix.ensure_column(attr);
        for (int i = 0; i < n; ++i) matrix.set(ids[i], attr, rng.uniform() < 0.5);
    }
    const WeightVector w = skewed_weights(n);
    for (auto _ : state) benchmark::DoNotOptimize(train_stump(matrix, attrs, labels, w));
}
BENCHMARK(BM_TrainStump)->Arg(200)->Arg(2000);

void BM_UpdateWeights(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Rng rng(4);
    std::vector<double> margins(n);
    for (int i = 0; i < n; ++i) margins[i] = 4.0 * (rng.uniform() - 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(update_weights(margins));
}
BENCHMARK(BM_UpdateWeights)->Arg(200)->Arg(20000);

void BM_FullScriptedTrain(benchmark::State& state) {
    SynthWorld world;
    world.eta = 0.1;
    world.seed = 5;
    SynthData data = generate(world, static_cast<int>(state.range(0)));
    TrainConfig cfg;
    cfg.seed = 6;
    for (auto _ : state) {
        LabelCache cache;
        QueryLedger ledger;
        benchmark::DoNotOptimize(
            train(data.dataset, *data.oracle, cfg, OracleConfig{}, cache, ledger));
    }
}
BENCHMARK(BM_FullScriptedTrain)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
