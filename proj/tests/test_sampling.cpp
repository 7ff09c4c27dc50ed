#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "attrboost/sampling.hpp"

using namespace attrboost;

namespace {

Dataset make_dataset(const std::vector<int>& labels) {
    std::vector<Instance> instances;
    for (std::size_t i = 0; i < labels.size(); ++i)
        instances.push_back({"i" + std::to_string(i), "mem://" + std::to_string(i), labels[i]});
    return Dataset(std::move(instances));
}

}  // namespace

TEST_CASE("delta' shrinks as delta_t / (r(r+1))") {
    // r=1: B = min(N, ceil(20 * ln(1/0.05))) with delta'=0.1/2=0.05
    const std::size_t b = filter_budget(1000, 0.1, 0.1, 1);
    CHECK(b == static_cast<std::size_t>(std::ceil(20.0 * std::log(1.0 / 0.05))));
    CHECK(filter_budget(4, 0.1, 0.1, 1) == 4);  // capped at N
    // delta' shrinks with r, so the scan budget grows
    CHECK(filter_budget(1000, 0.1, 0.1, 50) >= filter_budget(1000, 0.1, 0.1, 5));
}

TEST_CASE("point-mass weights always return the heavy instance") {
    const Dataset ds = make_dataset({+1, -1, -1, -1});
    // near-point mass: invariants demand strictly positive weights
    const WeightVector w = WeightVector::normalized({1.0, 1e-300, 1e-300, 1e-300});
    FilterState state(0.1, 0.1, Rng(7));
    for (int call = 0; call < 50; ++call) {
        auto draw = filter(ds, w, state);
        REQUIRE(draw.has_value());
        CHECK(draw->index == 0);
    }
}

TEST_CASE("filter validates its inputs") {
    const Dataset ds = make_dataset({+1, -1});
    FilterState state(0.1, 0.1, Rng(1));
    WeightVector w = WeightVector::uniform(2);
    CHECK_THROWS_AS(filter(make_dataset({+1, -1, +1}), w, state), DataError);
    CHECK_THROWS_AS(FilterState(0.0, 0.1, Rng(1)), ConfigError);
    CHECK_THROWS_AS(FilterState(0.1, 1.0, Rng(1)), ConfigError);
}

TEST_CASE("no-accept probability matches exact enumeration on uniform N=4") {
    // N=4, w_i=0.25, eps=0.1, delta=0.1, first call: delta'=0.05,
    // B = min(4, ceil(20 ln 20)) = 4, so P(bottom) = 0.75^4 = 0.31640625.
    const double expected = std::pow(0.75, 4);
    const Dataset ds = make_dataset({+1, +1, -1, -1});
    const WeightVector w = WeightVector::uniform(4);

    const int trials = 1'000'000;
    int bottoms = 0;
    Rng rng(123);
    for (int i = 0; i < trials; ++i) {
        FilterState state(0.1, 0.1, rng.split(i));
        if (!filter(ds, w, state)) ++bottoms;
        CHECK(state.last_trials <= 4);
    }
    const double observed = static_cast<double>(bottoms) / trials;
    CHECK(std::abs(observed - expected) < 0.002);
}

TEST_CASE("r increments by one per call") {
    const Dataset ds = make_dataset({+1, -1, +1, -1});
    const WeightVector w = WeightVector::uniform(4);
    FilterState state(0.1, 0.1, Rng(5));
    for (std::size_t call = 1; call <= 200; ++call) {
        filter(ds, w, state);
        CHECK(state.r == call);
    }
}

TEST_CASE("trial count never exceeds the budget") {
    const Dataset ds = make_dataset(std::vector<int>{+1, -1, +1, -1, +1, -1, +1, -1,
                                                     +1, -1, +1, -1, +1, -1, +1, -1});
    std::vector<double> raw(16);
    for (int i = 0; i < 16; ++i) raw[i] = i + 1.0;
    const WeightVector w = WeightVector::normalized(std::move(raw));
    FilterState state(0.05, 0.2, Rng(11));
    for (int call = 1; call <= 2000; ++call) {
        filter(ds, w, state);
        CHECK(state.last_trials <= filter_budget(16, 0.05, 0.2, state.r));
    }
}

TEST_CASE("build_sample_set: q=1 on a two-instance dataset is forced") {
    const Dataset ds = make_dataset({+1, -1});
    const WeightVector w = WeightVector::uniform(2);
    FilterState state(0.1, 0.1, Rng(3));
    const SampleSet set = build_sample_set(ds, w, 1, state, 1000);
    REQUIRE(set.positives.size() == 1);
    REQUIRE(set.negatives.size() == 1);
    CHECK(set.positives[0].id == "i0");
    CHECK(set.negatives[0].id == "i1");
}

TEST_CASE("concentrated weights never duplicate the heavy instance") {
    // 0.97 on one positive, the rest shared; q=2 must complete with the
    // heavy positive appearing exactly once.
    const Dataset ds = make_dataset({+1, +1, +1, -1, -1, -1});
    std::vector<double> raw = {0.97, 0.006, 0.006, 0.006, 0.006, 0.006};
    const WeightVector w = WeightVector::normalized(std::move(raw));
    Rng rng(99);
    for (int trial = 0; trial < 10'000; ++trial) {
        FilterState state(0.1, 0.1, rng.split(trial));
        const SampleSet set = build_sample_set(ds, w, 2, state, 4000);
        REQUIRE(set.positives.size() == 2);
        REQUIRE(set.negatives.size() == 2);
        std::set<std::string> ids;
        int heavy = 0;
        for (const auto& inst : set.positives) {
            ids.insert(inst.id);
            if (inst.id == "i0") ++heavy;
        }
        for (const auto& inst : set.negatives) ids.insert(inst.id);
        CHECK(ids.size() == 4);  // no duplicates anywhere in the set
        CHECK(heavy == 1);
    }
}

TEST_CASE("build_sample_set rejects datasets with too few of a class") {
    const Dataset ds = make_dataset({+1, -1, -1, -1});
    const WeightVector w = WeightVector::uniform(4);
    FilterState state(0.1, 0.1, Rng(1));
    CHECK_THROWS_AS(build_sample_set(ds, w, 2, state, 1000), DataError);
}

TEST_CASE("stall fallback still yields a valid, duplicate-free set") {
    // One class carries almost no weight, so FILTER stalls on it; the
    // fallback must fill that side by direct weighted sampling.
    const Dataset ds = make_dataset({+1, +1, +1, -1, -1, -1});
    std::vector<double> raw = {1.0, 1.0, 1.0, 1e-12, 1e-12, 1e-12};
    const WeightVector w = WeightVector::normalized(std::move(raw));
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        FilterState state(0.1, 0.1, rng.split(trial));
        const SampleSet set = build_sample_set(ds, w, 2, state, 30);
        REQUIRE(set.positives.size() == 2);
        REQUIRE(set.negatives.size() == 2);
        std::set<std::string> ids;
        for (const auto& inst : set.positives) ids.insert(inst.id);
        for (const auto& inst : set.negatives) ids.insert(inst.id);
        CHECK(ids.size() == 4);
        for (const auto& inst : set.positives) CHECK(inst.label == +1);
        for (const auto& inst : set.negatives) CHECK(inst.label == -1);
    }
}

TEST_CASE("sample sets satisfy their invariants over random worlds") {
    Rng rng(314);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 4 + static_cast<int>(rng.bounded(20));
        std::vector<int> labels(n);
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            labels[i] = rng.uniform() < 0.5 ? +1 : -1;
            if (labels[i] == +1) ++pos;
        }
        if (pos == 0) labels[0] = +1, ++pos;
        if (pos == n) labels[0] = -1, --pos;
        const int q = 1 + static_cast<int>(rng.bounded(std::min(pos, n - pos)));
        std::vector<double> raw(n);
        for (int i = 0; i < n; ++i) raw[i] = rng.uniform() + 1e-3;
        const Dataset ds = make_dataset(labels);
        const WeightVector w = WeightVector::normalized(std::move(raw));
        FilterState state(0.1, 0.1, rng.split(trial));
        const SampleSet set = build_sample_set(ds, w, q, state, 5000);
        CHECK(set.positives.size() == static_cast<std::size_t>(q));
        CHECK(set.negatives.size() == static_cast<std::size_t>(q));
        std::set<std::string> ids;
        for (const auto& inst : set.positives) {
            CHECK(inst.label == +1);
            ids.insert(inst.id);
        }
        for (const auto& inst : set.negatives) {
            CHECK(inst.label == -1);
            ids.insert(inst.id);
        }
        CHECK(ids.size() == 2 * static_cast<std::size_t>(q));
    }
}
