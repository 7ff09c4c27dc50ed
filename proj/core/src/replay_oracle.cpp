#include "attrboost/replay_oracle.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include <json.hpp>

namespace attrboost {

namespace {

std::string timestamp_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

ReplayOracle::ReplayOracle(std::unique_ptr<OracleBackend> inner, std::string journal_path,
                           Mode mode)
    : inner_(std::move(inner)), journal_path_(std::move(journal_path)), mode_(mode) {
    if (mode_ == Mode::Record) {
        if (!inner_) throw ConfigError("record mode needs an inner backend");
        template_version_ = inner_->template_version();
        std::ofstream out(journal_path_, std::ios::trunc);
        if (!out) throw OracleError("cannot create replay journal '" + journal_path_ + "'");
        return;
    }
    std::ifstream in(journal_path_);
    if (!in) throw OracleError("cannot open replay journal '" + journal_path_ + "'");
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw OracleError("corrupt replay journal line: " + std::string(e.what()));
        }
        responses_[rec.at("request_hash").get<std::string>()] = rec.at("response").dump();
        if (rec.contains("template_hash"))
            template_version_ = rec["template_hash"].get<std::string>();
    }
}

std::string ReplayOracle::id() const {
    if (mode_ == Mode::Record) return "record(" + inner_->id() + ")";
    return "replay";
}

std::string ReplayOracle::template_version() const { return template_version_; }

void ReplayOracle::record(const std::string& kind, const std::string& request_hash,
                          const std::string& request_json, const std::string& response_json) {
    std::lock_guard lock(mutex_);
    std::ofstream out(journal_path_, std::ios::app);
    if (!out) throw OracleError("cannot append to replay journal '" + journal_path_ + "'");
    nlohmann::json rec{{"request_hash", request_hash},
                       {"kind", kind},
                       {"request", nlohmann::json::parse(request_json)},
                       {"response", nlohmann::json::parse(response_json)},
                       {"backend", inner_->id()},
                       {"template_hash", template_version_},
                       {"ts", timestamp_now()}};
    out << rec.dump() << '\n';
}

std::vector<std::string> ReplayOracle::define(const DefinitionRequest& req) {
    const std::string request_json = to_canonical_json(req);
    const std::string hash = sha256_hex(request_json);
    if (mode_ == Mode::Replay) {
        std::lock_guard lock(mutex_);
        auto it = responses_.find(hash);
        if (it == responses_.end())
            throw OracleError("replay miss for define request " + hash.substr(0, 12));
        return nlohmann::json::parse(it->second)
            .at("questions")
            .get<std::vector<std::string>>();
    }
    auto questions = inner_->define(req);
    record("define", hash, request_json, nlohmann::json{{"questions", questions}}.dump());
    return questions;
}

std::vector<bool> ReplayOracle::label(const LabelRequest& req) {
    const std::string request_json = to_canonical_json(req);
    const std::string hash = sha256_hex(request_json);
    if (mode_ == Mode::Replay) {
        std::lock_guard lock(mutex_);
        auto it = responses_.find(hash);
        if (it == responses_.end())
            throw OracleError("replay miss for label request " + hash.substr(0, 12));
        return nlohmann::json::parse(it->second).at("answers").get<std::vector<bool>>();
    }
    auto answers = inner_->label(req);
    record("label", hash, request_json, nlohmann::json{{"answers", answers}}.dump());
    return answers;
}

}  // namespace attrboost
