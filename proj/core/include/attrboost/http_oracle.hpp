#pragma once

#include <memory>
#include <string>

#include "attrboost/oracle.hpp"

namespace attrboost {

/// Default prompt templates. Placeholders: {k}, {group_a}, {group_b} for
/// definition; {questions}, {n} for labeling. The template hash enters the
/// request hash, so editing a template invalidates replay journals and
/// caches built against the old wording.
std::string default_define_template();
std::string default_label_template();

struct HttpOracleOptions {
    std::string define_template;  // empty = default
    std::string label_template;
    bool attach_media_base64 = true;  // false passes media refs as URIs
};

/// JSON-over-HTTP multimodal backend. Speaks a single generic chat-style
/// schema; vendor-specific translation belongs in a gateway in front of it.
class HttpOracle : public OracleBackend {
public:
    HttpOracle(OracleConfig cfg, HttpOracleOptions options = {});
    ~HttpOracle() override;

    std::string id() const override;

    std::vector<std::string> define(const DefinitionRequest& req) override;
    std::vector<bool> label(const LabelRequest& req) override;

    std::string template_hash() const;
    std::string template_version() const override { return template_hash(); }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace attrboost
