#include "attrboost/manifest.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace attrboost {

namespace {

int map_label(const nlohmann::json& raw, const std::string& where) {
    if (!raw.is_number_integer())
        throw DataError(where + ": label must be an integer");
    switch (raw.get<int>()) {
        case 0: return -1;
        case 1: return +1;   // +1 passes through
        case -1: return -1;
        default: throw DataError(where + ": label must be one of {0, 1, -1, +1}");
    }
}

}  // namespace

Dataset load_manifest(std::istream& in, const std::string& source_name) {
    std::vector<Instance> instances;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = source_name + ":" + std::to_string(lineno);
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(where + ": invalid JSON: " + e.what());
        }
        if (!rec.contains("id") || !rec.contains("media_ref") || !rec.contains("label"))
            throw DataError(where + ": record needs id, media_ref, label");
        Instance inst;
        inst.id = rec.at("id").get<std::string>();
        inst.media_ref = rec.at("media_ref").get<std::string>();
        inst.label = map_label(rec.at("label"), where);
        instances.push_back(std::move(inst));
    }
    if (instances.empty()) throw DataError(source_name + ": empty manifest");
    return Dataset(std::move(instances));  // checks duplicates and class coverage
}

Dataset load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest '" + path + "'");
    return load_manifest(in, path);
}

}  // namespace attrboost
