// Command-line front end: train / predict / eval / attrs / synth / cache.
// Thin shell over the library; stdout carries machine-readable JSON,
// stderr carries diagnostics.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "attrboost/boosting.hpp"
#include "attrboost/http_oracle.hpp"
#include "attrboost/manifest.hpp"
#include "attrboost/model_io.hpp"
#include "attrboost/replay_oracle.hpp"
#include "attrboost/scripted_oracle.hpp"
#include "attrboost/synth.hpp"

namespace fs = std::filesystem;
using namespace attrboost;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitOracle = 3;
constexpr int kExitData = 4;

struct RunSpec {
    TrainConfig train;
    OracleConfig oracle;
    std::optional<std::uint64_t> seed;

    // scripted-backend knobs (not part of the override namespace)
    int scripted_dims = 16;
    double scripted_eta = 0.0;

    std::string journal;
    bool record = false;
};

void apply_override(RunSpec& spec, const std::string& key, const std::string& value) {
    try {
        if (key == "q") spec.train.q = std::stoi(value);
        else if (key == "k") spec.train.k = std::stoi(value);
        else if (key == "T") spec.train.T = std::stoi(value);
        else if (key == "delta") spec.train.delta = std::stod(value);
        else if (key == "epsilon") spec.train.epsilon = std::stod(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "gamma_clamp") spec.train.gamma_clamp = std::stod(value);
        else if (key == "tie_prediction") spec.train.tie_prediction = std::stoi(value);
        else if (key == "cumulative_features") spec.train.cumulative_features = (value == "true" || value == "1");
        else if (key == "r_max_factor") spec.train.r_max_factor = std::stoi(value);
        else if (key == "backend") {
            if (value == "http") spec.oracle.backend = OracleBackendKind::Http;
            else if (value == "scripted") spec.oracle.backend = OracleBackendKind::Scripted;
            else if (value == "replay") spec.oracle.backend = OracleBackendKind::Replay;
            else throw ConfigError("unknown oracle backend '" + value + "'");
        }
        else if (key == "endpoint") spec.oracle.endpoint = value;
        else if (key == "model_name") spec.oracle.model_name = value;
        else if (key == "temperature") spec.oracle.temperature = std::stod(value);
        else if (key == "max_retries") spec.oracle.max_retries = std::stoi(value);
        else if (key == "parallelism") spec.oracle.parallelism = std::stoi(value);
        else if (key == "timeout_sec") spec.oracle.timeout_sec = std::stod(value);
        else if (key == "requests_per_minute") spec.oracle.requests_per_minute = std::stod(value);
        else throw ConfigError("unknown override key '" + key + "'");
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad value '" + value + "' for key '" + key + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("value out of range for key '" + key + "'");
    }
}

void load_config_file(RunSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
    }
    for (const char* section : {"train", "oracle"}) {
        if (!doc.contains(section)) continue;
        for (const auto& [key, value] : doc[section].items()) {
            std::string str = value.is_string() ? value.get<std::string>() : value.dump();
            apply_override(spec, key, str);
        }
    }
}

/// Precedence: CLI flags and --set > config file > defaults.
void finalize(RunSpec& spec, const std::string& config_path,
              const std::vector<std::string>& overrides, const std::string& oracle_flag,
              const std::string& journal, bool record, std::optional<std::uint64_t> seed_flag,
              std::optional<int> parallelism_flag) {
    if (!config_path.empty()) load_config_file(spec, config_path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        apply_override(spec, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!oracle_flag.empty()) apply_override(spec, "backend", oracle_flag);
    if (!journal.empty()) spec.journal = journal;
    spec.record = record;
    if (parallelism_flag) spec.oracle.parallelism = *parallelism_flag;
    if (seed_flag) spec.seed = seed_flag;
    if (!spec.seed) {
        std::random_device rd;
        spec.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
        std::cerr << "seed: " << *spec.seed << "\n";
    }
    spec.train.seed = *spec.seed;
    spec.train.validate();
    spec.oracle.validate();
}

std::unique_ptr<OracleBackend> make_backend(const RunSpec& spec) {
    std::unique_ptr<OracleBackend> inner;
    switch (spec.oracle.backend) {
        case OracleBackendKind::Scripted: {
            auto scripted = std::make_unique<ScriptedOracle>(spec.scripted_dims,
                                                             spec.scripted_eta, spec.train.seed);
            inner = std::move(scripted);
            break;
        }
        case OracleBackendKind::Http:
            inner = std::make_unique<HttpOracle>(spec.oracle);
            break;
        case OracleBackendKind::Replay:
            if (spec.journal.empty()) throw ConfigError("replay backend needs --journal");
            return std::make_unique<ReplayOracle>(nullptr, spec.journal,
                                                  ReplayOracle::Mode::Replay);
    }
    if (spec.record) {
        if (spec.journal.empty()) throw ConfigError("--record needs --journal");
        return std::make_unique<ReplayOracle>(std::move(inner), spec.journal,
                                              ReplayOracle::Mode::Record);
    }
    return inner;
}

void write_ledger(const QueryLedger& ledger, const std::string& path) {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& it : ledger.per_iteration())
        per.push_back({{"t", it.t}, {"define_calls", it.define_calls}, {"label_calls", it.label_calls}});
    nlohmann::json doc{{"define_calls", ledger.define_calls()},
                       {"label_calls", ledger.label_calls()},
                       {"per_iteration", per}};
    std::ofstream out(path, std::ios::trunc);
    out << doc.dump(2) << '\n';
}

int cmd_train(const RunSpec& spec, const std::string& manifest_path, const std::string& out_dir) {
    const Dataset dataset = load_manifest(manifest_path);
    fs::create_directories(out_dir);
    auto backend = make_backend(spec);
    LabelCache cache((fs::path(out_dir) / "cache.jsonl").string());
    QueryLedger ledger;
    TrainResult result = train(dataset, *backend, spec.train, spec.oracle, cache, ledger);
    save_model(result.model, (fs::path(out_dir) / "model.json").string());
    save_trace(result.trace, (fs::path(out_dir) / "trace.json").string());
    write_ledger(ledger, (fs::path(out_dir) / "ledger.json").string());
    std::cerr << "trained " << result.model.rounds.size() << " rounds; artifacts in " << out_dir
              << "\n";
    return 0;
}

int cmd_predict(const RunSpec& spec, const std::string& model_path,
                const std::string& manifest_path, const std::string& cache_path) {
    const EnsembleModel model = load_model(model_path);
    const Dataset dataset = load_manifest(manifest_path);
    auto backend = make_backend(spec);
    LabelCache cache = cache_path.empty() ? LabelCache() : LabelCache(cache_path);
    QueryLedger ledger;
    const auto predictions =
        predict_batch(model, dataset.instances(), *backend, spec.oracle, cache, ledger);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        std::cout << "{\"id\": " << nlohmann::json(dataset.at(i).id).dump()
                  << ", \"label\": " << predictions[i].label
                  << ", \"margin\": " << format_double(predictions[i].margin) << "}\n";
    }
    return 0;
}

int cmd_eval(const RunSpec& spec, const std::string& model_path,
             const std::string& manifest_path, const std::string& cache_path) {
    const EnsembleModel model = load_model(model_path);
    const Dataset dataset = load_manifest(manifest_path);
    auto backend = make_backend(spec);
    LabelCache cache = cache_path.empty() ? LabelCache() : LabelCache(cache_path);
    QueryLedger ledger;
    const auto predictions =
        predict_batch(model, dataset.instances(), *backend, spec.oracle, cache, ledger);

    long tp = 0, tn = 0, fp = 0, fn = 0;
    nlohmann::json margins = nlohmann::json::array();
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const int truth = dataset.at(i).label;
        const int pred = predictions[i].label;
        if (truth == +1 && pred == +1) ++tp;
        else if (truth == -1 && pred == -1) ++tn;
        else if (truth == -1 && pred == +1) ++fp;
        else ++fn;
        margins.push_back({{"id", dataset.at(i).id},
                           {"label", truth},
                           {"pred", pred},
                           {"margin", predictions[i].margin}});
    }
    nlohmann::json report{
        {"accuracy", static_cast<double>(tp + tn) / static_cast<double>(dataset.size())},
        {"confusion", {{"tp", tp}, {"tn", tn}, {"fp", fp}, {"fn", fn}}},
        {"oracle_calls", ledger.label_calls()},
        {"margins", margins}};
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_attrs(const std::string& model_path, std::string trace_path) {
    const EnsembleModel model = load_model(model_path);
    if (trace_path.empty()) {
        const fs::path candidate = fs::path(model_path).parent_path() / "trace.json";
        if (fs::exists(candidate)) trace_path = candidate.string();
    }
    std::vector<double> gammas;  // by round, from the trace when available
    if (!trace_path.empty()) {
        std::ifstream in(trace_path);
        if (in) {
            try {
                nlohmann::json doc = nlohmann::json::parse(in);
                for (const auto& it : doc.at("iterations"))
                    gammas.push_back(it.at("gamma").get<double>());
            } catch (const nlohmann::json::exception&) {
                gammas.clear();  // corrupt trace is non-fatal for listing
            }
        }
    }

    std::vector<std::size_t> order(model.rounds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return model.rounds[a].alpha > model.rounds[b].alpha;  // ties keep iteration order
    });

    nlohmann::json listing = nlohmann::json::array();
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const std::size_t i = order[rank];
        const auto& round = model.rounds[i];
        const auto& attr = model.attribute(round.stump.attr_id);
        nlohmann::json entry{{"rank", rank + 1},
                             {"iteration", static_cast<int>(i) + 1},
                             {"attr_id", attr.attr_id},
                             {"question", attr.question},
                             {"polarity", round.stump.polarity},
                             {"alpha", round.alpha}};
        if (i < gammas.size()) entry["gamma"] = gammas[i];
        listing.push_back(entry);
    }
    std::cout << listing.dump(2) << "\n";
    return 0;
}

int cmd_synth(const RunSpec& spec, int dims, const std::string& rule_dims_csv, int theta,
              double eta, int n_train, int n_test, int trials) {
    SynthWorld world;
    world.D = dims;
    world.eta = eta;
    world.theta = theta;
    world.seed = spec.train.seed;
    world.rule_dims.clear();
    std::stringstream ss(rule_dims_csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        try {
            world.rule_dims.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw ConfigError("bad --rule-dims entry '" + token + "'");
        }
    }
    const ExperimentReport report =
        run_experiment(world, n_train, n_test, spec.train, spec.oracle, trials);
    std::cout << report.to_json() << "\n";
    return 0;
}

int cmd_cache(const std::string& journal, bool do_compact) {
    LabelCache cache(journal);
    if (do_compact) cache.compact();
    std::cout << "{\"entries\": " << cache.size() << "}\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive attribute discovery: boosting over oracle-defined yes/no attributes"};
    app.require_subcommand(1);

    std::string config_path, manifest_path, out_dir, model_path, trace_path, cache_path;
    std::string oracle_flag, journal;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed_flag;
    std::optional<int> parallelism_flag;
    bool record = false;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Config file (JSON, train + oracle sections)");
        cmd->add_option("--set", overrides, "Override, key=value (repeatable)");
        cmd->add_option("--seed", seed_flag, "Master RNG seed");
        cmd->add_option("--oracle", oracle_flag, "Oracle backend: http|scripted|replay")
            ->check(CLI::IsMember({"http", "scripted", "replay"}));
        cmd->add_option("--journal", journal, "Replay journal path");
        cmd->add_flag("--record", record, "Record oracle traffic to the journal");
        cmd->add_option("--parallelism", parallelism_flag, "Concurrent labeling calls");
    };

    RunSpec spec;

    auto* train_cmd = app.add_subcommand("train", "Train a model from a labeled manifest");
    add_common(train_cmd);
    train_cmd->add_option("--manifest", manifest_path, "Training manifest (JSON lines)")->required();
    train_cmd->add_option("--out", out_dir, "Output directory")->required();
    train_cmd->add_option("--scripted-dims", spec.scripted_dims, "Scripted oracle hidden dims");
    train_cmd->add_option("--scripted-eta", spec.scripted_eta, "Scripted oracle flip noise");

    auto* predict_cmd = app.add_subcommand("predict", "Predict labels for a manifest");
    add_common(predict_cmd);
    predict_cmd->add_option("--model", model_path, "Model file")->required();
    predict_cmd->add_option("--manifest", manifest_path, "Manifest to predict")->required();
    predict_cmd->add_option("--cache", cache_path, "Label cache journal");
    predict_cmd->add_option("--scripted-dims", spec.scripted_dims, "Scripted oracle hidden dims");
    predict_cmd->add_option("--scripted-eta", spec.scripted_eta, "Scripted oracle flip noise");

    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a labeled manifest");
    add_common(eval_cmd);
    eval_cmd->add_option("--model", model_path, "Model file")->required();
    eval_cmd->add_option("--manifest", manifest_path, "Labeled manifest")->required();
    eval_cmd->add_option("--cache", cache_path, "Label cache journal");
    eval_cmd->add_option("--scripted-dims", spec.scripted_dims, "Scripted oracle hidden dims");
    eval_cmd->add_option("--scripted-eta", spec.scripted_eta, "Scripted oracle flip noise");

    auto* attrs_cmd = app.add_subcommand("attrs", "List attributes by descending confidence");
    attrs_cmd->add_option("--model", model_path, "Model file")->required();
    attrs_cmd->add_option("--trace", trace_path, "Trace file (for per-round edges)");

    auto* synth_cmd = app.add_subcommand("synth", "Run a seeded synthetic experiment");
    add_common(synth_cmd);
    int dims = 8, theta = 2, n_train = 200, n_test = 200, trials = 10;
    double eta = 0.0;
    std::string rule_dims_csv = "0,1,2";
    synth_cmd->add_option("--dims", dims, "Hidden dims per instance");
    synth_cmd->add_option("--rule-dims", rule_dims_csv, "Label-rule dims, comma-separated");
    synth_cmd->add_option("--theta", theta, "Label-rule threshold");
    synth_cmd->add_option("--eta", eta, "Answer flip-noise rate");
    synth_cmd->add_option("--n-train", n_train, "Training instances per trial");
    synth_cmd->add_option("--n-test", n_test, "Held-out instances per trial");
    synth_cmd->add_option("--trials", trials, "Independent trials");

    auto* cache_cmd = app.add_subcommand("cache", "Inspect or compact a label cache journal");
    std::string cache_journal;
    bool do_compact = false;
    cache_cmd->add_option("--journal", cache_journal, "Cache journal path")->required();
    cache_cmd->add_flag("--compact", do_compact, "Rewrite the journal with live entries only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (cache_cmd->parsed()) return cmd_cache(cache_journal, do_compact);
        if (attrs_cmd->parsed()) return cmd_attrs(model_path, trace_path);

        finalize(spec, config_path, overrides, oracle_flag, journal, record, seed_flag,
                 parallelism_flag);
        if (train_cmd->parsed()) return cmd_train(spec, manifest_path, out_dir);
        if (predict_cmd->parsed()) return cmd_predict(spec, model_path, manifest_path, cache_path);
        if (eval_cmd->parsed()) return cmd_eval(spec, model_path, manifest_path, cache_path);
        if (synth_cmd->parsed())
            return cmd_synth(spec, dims, rule_dims_csv, theta, eta, n_train, n_test, trials);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const OracleError& e) {
        std::cerr << "oracle error: " << e.what() << "\n";
        return kExitOracle;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
