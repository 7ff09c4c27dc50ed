#include "attrboost/http_oracle.hpp"

#include <chrono>
#include <condition_variable>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace attrboost {

std::string default_define_template() {
    return "You are shown two groups of audio recordings.\n"
           "Group A: {group_a}\n"
           "Group B: {group_b}\n"
           "Create {k} attributes that describe the differences between Group A and "
           "Group B. Each attribute must be a yes/no question about a single "
           "recording. Respond with a strict JSON object "
           "{\"questions\": [\"...\"]} containing exactly {k} distinct questions "
           "and nothing else.\n";
}

std::string default_label_template() {
    return "You are given one audio recording and {n} yes/no questions.\n"
           "Questions:\n{questions}\n"
           "Answer every question for this recording. Respond with a strict JSON "
           "object {\"answers\": [true, false, ...]} containing exactly {n} booleans "
           "in question order and nothing else.\n";
}

namespace {

constexpr const char* kCorrectiveSuffix =
    "\nYour previous reply did not match the required JSON schema or count. "
    "Reply again with ONLY the JSON object, with exactly the requested number "
    "of entries.";

std::string replace_all_str(std::string s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string base64_encode(const std::string& data) {
    static const char tbl[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < data.size()) {
        const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                           (static_cast<unsigned char>(data[i + 1]) << 8) |
                           static_cast<unsigned char>(data[i + 2]);
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out.push_back(tbl[(v >> 6) & 63]);
        out.push_back(tbl[v & 63]);
        i += 3;
    }
    if (i + 1 == data.size()) {
        const unsigned v = static_cast<unsigned char>(data[i]) << 16;
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out += "==";
    } else if (i + 2 == data.size()) {
        const unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                           (static_cast<unsigned char>(data[i + 1]) << 8);
        out.push_back(tbl[(v >> 18) & 63]);
        out.push_back(tbl[(v >> 12) & 63]);
        out.push_back(tbl[(v >> 6) & 63]);
        out += "=";
    }
    return out;
}

std::string mime_for(const std::string& ref) {
    auto ends_with = [&](const char* suffix) {
        const std::string s = suffix;
        return ref.size() >= s.size() && ref.compare(ref.size() - s.size(), s.size(), s) == 0;
    };
    if (ends_with(".wav")) return "audio/wav";
    if (ends_with(".mp3")) return "audio/mpeg";
    if (ends_with(".flac")) return "audio/flac";
    if (ends_with(".ogg")) return "audio/ogg";
    return "application/octet-stream";
}

/// Simple token bucket; cap = burst of 1 minute worth of requests.
class RateLimiter {
public:
    explicit RateLimiter(double per_minute) : per_minute_(per_minute), tokens_(per_minute) {}

    void acquire() {
        if (per_minute_ <= 0.0) return;
        std::unique_lock lock(mutex_);
        for (;;) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            lock.unlock();
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
            lock.lock();
        }
    }

private:
    void refill() {
        const auto now = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ = std::min(per_minute_, tokens_ + secs * per_minute_ / 60.0);
    }

    double per_minute_;
    double tokens_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    std::mutex mutex_;
};

}  // namespace

struct HttpOracle::Impl {
    OracleConfig cfg;
    HttpOracleOptions options;
    std::string host;  // scheme://host:port
    std::string path;
    std::string template_hash;
    RateLimiter limiter;

    Impl(OracleConfig c, HttpOracleOptions o)
        : cfg(std::move(c)), options(std::move(o)), limiter(cfg.requests_per_minute) {
        cfg.validate();
        if (options.define_template.empty()) options.define_template = default_define_template();
        if (options.label_template.empty()) options.label_template = default_label_template();
        template_hash =
            sha256_hex(options.define_template + "\x1f" + options.label_template).substr(0, 16);

        const auto& ep = cfg.endpoint;
        if (ep.empty()) throw ConfigError("http oracle needs an endpoint");
        const auto scheme_end = ep.find("://");
        if (scheme_end == std::string::npos) throw ConfigError("endpoint must include scheme");
        const auto path_start = ep.find('/', scheme_end + 3);
        if (path_start == std::string::npos) {
            host = ep;
            path = "/";
        } else {
            host = ep.substr(0, path_start);
            path = ep.substr(path_start);
        }
    }

    nlohmann::json media_part(const std::string& ref) const {
        if (options.attach_media_base64) {
            std::ifstream in(ref, std::ios::binary);
            if (in) {
                std::ostringstream buf;
                buf << in.rdbuf();
                return {{"type", "input_audio"},
                        {"audio", {{"data", base64_encode(buf.str())}, {"mime", mime_for(ref)}}}};
            }
        }
        return {{"type", "audio_uri"}, {"uri", ref}};
    }

    nlohmann::json post(const nlohmann::json& body) {
        limiter.acquire();
        httplib::Client client(host);
        client.set_read_timeout(std::chrono::duration<double>(cfg.timeout_sec));
        client.set_connection_timeout(std::chrono::duration<double>(cfg.timeout_sec));
        auto res = client.Post(path, body.dump(), "application/json");
        if (!res)
            throw OracleError("http oracle: no response from " + host + path);
        if (res->status != 200)
            throw OracleError("http oracle: status " + std::to_string(res->status));
        try {
            return nlohmann::json::parse(res->body);
        } catch (const nlohmann::json::parse_error& e) {
            throw OracleError("http oracle: response is not JSON: " + std::string(e.what()));
        }
    }

    nlohmann::json request_body(const std::string& prompt,
                                const std::vector<nlohmann::json>& media,
                                const nlohmann::json& schema) const {
        nlohmann::json content = nlohmann::json::array();
        content.push_back({{"type", "text"}, {"text", prompt}});
        for (const auto& part : media) content.push_back(part);
        return {{"model", cfg.model_name},
                {"temperature", cfg.temperature},
                {"messages", nlohmann::json::array({nlohmann::json{
                                 {"role", "user"}, {"content", content}}})},
                {"response_schema", schema}};
    }
};

HttpOracle::HttpOracle(OracleConfig cfg, HttpOracleOptions options)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(options))) {}

HttpOracle::~HttpOracle() = default;

std::string HttpOracle::id() const { return "http:" + impl_->cfg.model_name; }

std::string HttpOracle::template_hash() const { return impl_->template_hash; }

std::vector<std::string> HttpOracle::define(const DefinitionRequest& req) {
    std::string prompt = impl_->options.define_template;
    prompt = replace_all_str(prompt, "{k}", std::to_string(req.k));
    prompt = replace_all_str(prompt, "{group_a}", std::to_string(req.group_a.size()) +
                                                      " recordings attached first");
    prompt = replace_all_str(prompt, "{group_b}", std::to_string(req.group_b.size()) +
                                                      " recordings attached second");
    if (req.attempt > 0) prompt += kCorrectiveSuffix;

    std::vector<nlohmann::json> media;
    for (const auto& ref : req.group_a) media.push_back(impl_->media_part(ref));
    for (const auto& ref : req.group_b) media.push_back(impl_->media_part(ref));

    const nlohmann::json schema = {{"type", "object"},
                                   {"properties",
                                    {{"questions", {{"type", "array"}, {"items", {{"type", "string"}}}}}}},
                                   {"required", {"questions"}}};
    const nlohmann::json reply = impl_->post(impl_->request_body(prompt, media, schema));
    if (!reply.contains("questions") || !reply["questions"].is_array())
        return {};  // frontend treats a wrong shape as a malformed (retryable) response
    std::vector<std::string> questions;
    for (const auto& q : reply["questions"])
        if (q.is_string()) questions.push_back(q.get<std::string>());
    return questions;
}

std::vector<bool> HttpOracle::label(const LabelRequest& req) {
    std::string listing;
    for (std::size_t i = 0; i < req.questions.size(); ++i)
        listing += std::to_string(i + 1) + ". " + req.questions[i] + "\n";
    std::string prompt = impl_->options.label_template;
    prompt = replace_all_str(prompt, "{n}", std::to_string(req.questions.size()));
    prompt = replace_all_str(prompt, "{questions}", listing);
    if (req.attempt > 0) prompt += kCorrectiveSuffix;

    const nlohmann::json schema = {{"type", "object"},
                                   {"properties",
                                    {{"answers", {{"type", "array"}, {"items", {{"type", "boolean"}}}}}}},
                                   {"required", {"answers"}}};
    const nlohmann::json reply =
        impl_->post(impl_->request_body(prompt, {impl_->media_part(req.media_ref)}, schema));
    if (!reply.contains("answers") || !reply["answers"].is_array()) return {};
    std::vector<bool> answers;
    for (const auto& a : reply["answers"]) {
        if (!a.is_boolean()) return {};
        answers.push_back(a.get<bool>());
    }
    return answers;
}

}  // namespace attrboost
