#include "attrboost/model_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace attrboost {

namespace {
constexpr int kSchemaVersion = 1;

std::string js(const std::string& s) { return nlohmann::json(s).dump(); }
}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_model(const EnsembleModel& model, std::ostream& out) {
    model.validate();
    const TrainConfig& c = model.config_snapshot;
    out << "{\n";
    out << "  \"schema_version\": " << kSchemaVersion << ",\n";
    out << "  \"config\": {"
        << "\"q\": " << c.q << ", \"k\": " << c.k << ", \"T\": " << c.T
        << ", \"delta\": " << format_double(c.delta)
        << ", \"epsilon\": " << format_double(c.epsilon)
        << ", \"seed\": " << c.seed
        << ", \"gamma_clamp\": " << format_double(c.gamma_clamp)
        << ", \"tie_prediction\": " << c.tie_prediction
        << ", \"cumulative_features\": " << (c.cumulative_features ? "true" : "false")
        << ", \"r_max_factor\": " << c.r_max_factor << "},\n";
    out << "  \"attributes\": [";
    for (std::size_t i = 0; i < model.attributes.size(); ++i) {
        const auto& a = model.attributes[i];
        out << (i ? ",\n    " : "\n    ") << "{\"attr_id\": " << js(a.attr_id)
            << ", \"iteration\": " << a.iteration << ", \"question\": " << js(a.question) << "}";
    }
    out << (model.attributes.empty() ? "]" : "\n  ]") << ",\n";
    out << "  \"rounds\": [";
    for (std::size_t i = 0; i < model.rounds.size(); ++i) {
        const auto& r = model.rounds[i];
        out << (i ? ",\n    " : "\n    ") << "{\"attr_id\": " << js(r.stump.attr_id)
            << ", \"polarity\": " << r.stump.polarity
            << ", \"alpha\": " << format_double(r.alpha) << "}";
    }
    out << (model.rounds.empty() ? "]" : "\n  ]") << "\n";
    out << "}\n";
}

void save_model(const EnsembleModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    save_model(model, out);
    if (!out) throw DataError("write failure on model file '" + path + "'");
}

EnsembleModel load_model(std::istream& in, const std::string& source_name) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError(source_name + ": invalid model JSON: " + e.what());
    }
    if (doc.value("schema_version", -1) != kSchemaVersion)
        throw DataError(source_name + ": unsupported model schema_version");

    EnsembleModel model;
    const auto& c = doc.at("config");
    model.config_snapshot.q = c.at("q").get<int>();
    model.config_snapshot.k = c.at("k").get<int>();
    model.config_snapshot.T = c.at("T").get<int>();
    model.config_snapshot.delta = c.at("delta").get<double>();
    model.config_snapshot.epsilon = c.at("epsilon").get<double>();
    model.config_snapshot.seed = c.at("seed").get<std::uint64_t>();
    model.config_snapshot.gamma_clamp = c.at("gamma_clamp").get<double>();
    model.config_snapshot.tie_prediction = c.at("tie_prediction").get<int>();
    model.config_snapshot.cumulative_features = c.at("cumulative_features").get<bool>();
    model.config_snapshot.r_max_factor = c.at("r_max_factor").get<int>();

    for (const auto& a : doc.at("attributes")) {
        AttributeDefinition def;
        def.attr_id = a.at("attr_id").get<std::string>();
        def.iteration = a.at("iteration").get<int>();
        def.question = a.at("question").get<std::string>();
        model.attributes.push_back(std::move(def));
    }
    for (const auto& r : doc.at("rounds")) {
        BoostRound round;
        round.stump.attr_id = r.at("attr_id").get<std::string>();
        round.stump.polarity = r.at("polarity").get<int>();
        round.alpha = r.at("alpha").get<double>();
        model.rounds.push_back(std::move(round));
    }
    try {
        model.validate();
    } catch (const DataError& e) {
        throw DataError(source_name + ": " + e.what());
    }
    return model;
}

EnsembleModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    return load_model(in, path);
}

}  // namespace attrboost
