#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "attrboost/oracle.hpp"

namespace attrboost {

/// Record/replay wrapper around any backend.
///
/// Record mode forwards every call to the inner backend and appends the
/// request/response pair to a JSON-lines journal, keyed by the request's
/// SHA-256. Replay mode answers purely from the journal and never touches
/// the inner backend (which may be null); a request whose hash is absent
/// is an OracleError.
class ReplayOracle : public OracleBackend {
public:
    enum class Mode { Record, Replay };

    ReplayOracle(std::unique_ptr<OracleBackend> inner, std::string journal_path, Mode mode);

    std::string id() const override;
    std::string template_version() const override;

    std::vector<std::string> define(const DefinitionRequest& req) override;
    std::vector<bool> label(const LabelRequest& req) override;

    Mode mode() const { return mode_; }

private:
    void record(const std::string& kind, const std::string& request_hash,
                const std::string& request_json, const std::string& response_json);

    std::unique_ptr<OracleBackend> inner_;
    std::string journal_path_;
    Mode mode_;
    std::string template_version_;
    std::unordered_map<std::string, std::string> responses_;  // hash -> response JSON
    std::mutex mutex_;
};

}  // namespace attrboost
