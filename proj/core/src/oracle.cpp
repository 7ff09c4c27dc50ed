#include "attrboost/oracle.hpp"

#include <openssl/sha.h>

#include <atomic>
#include <chrono>
#include <ctime>
#include <thread>
#include <unordered_set>

#include <json.hpp>

namespace attrboost {

namespace {

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    static const char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (unsigned char b : digest) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xf]);
    }
    return out;
}

std::string to_canonical_json(const DefinitionRequest& req) {
    // nlohmann objects are alphabetically ordered, so dump() is canonical
    nlohmann::json j{{"kind", "define"},
                     {"group_a", req.group_a},
                     {"group_b", req.group_b},
                     {"k", req.k},
                     {"template_hash", req.template_hash},
                     {"attempt", req.attempt}};
    return j.dump();
}

std::string to_canonical_json(const LabelRequest& req) {
    nlohmann::json j{{"kind", "label"},
                     {"media_ref", req.media_ref},
                     {"questions", req.questions},
                     {"template_hash", req.template_hash},
                     {"attempt", req.attempt}};
    return j.dump();
}

void QueryLedger::begin_iteration(int t) {
    std::lock_guard lock(mutex_);
    per_iteration_.push_back(IterationCounts{t, 0, 0});
}

void QueryLedger::count_define() {
    std::lock_guard lock(mutex_);
    ++define_calls_;
    if (!per_iteration_.empty()) ++per_iteration_.back().define_calls;
}

void QueryLedger::count_label(long n) {
    std::lock_guard lock(mutex_);
    label_calls_ += n;
    if (!per_iteration_.empty()) per_iteration_.back().label_calls += n;
}

long QueryLedger::define_calls() const {
    std::lock_guard lock(mutex_);
    return define_calls_;
}

long QueryLedger::label_calls() const {
    std::lock_guard lock(mutex_);
    return label_calls_;
}

std::vector<QueryLedger::IterationCounts> QueryLedger::per_iteration() const {
    std::lock_guard lock(mutex_);
    return per_iteration_;
}

namespace {

/// Empty string on success, else a diagnostic for the retry loop.
std::string validate_questions(const std::vector<std::string>& questions, int k) {
    if (static_cast<int>(questions.size()) != k)
        return "expected " + std::to_string(k) + " questions, got " +
               std::to_string(questions.size());
    std::unordered_set<std::string> seen;
    for (const auto& q : questions) {
        const std::string norm = normalize_question(q);
        if (norm.empty()) return "empty question";
        if (norm.back() != '?') return "not a question: '" + q + "'";
        if (!seen.insert(norm).second) return "duplicate question: '" + q + "'";
    }
    return {};
}

}  // namespace

std::vector<AttributeDefinition> define_attributes(const SampleSet& sample_set, int k,
                                                   int iteration, OracleBackend& backend,
                                                   const OracleConfig& cfg,
                                                   QueryLedger& ledger) {
    if (k < 1) throw ConfigError("define_attributes: k must be >= 1");
    if (sample_set.positives.size() != sample_set.negatives.size())
        throw DataError("define_attributes: sample set sides differ in size");

    DefinitionRequest req;
    req.k = k;
    req.template_hash = backend.template_version();
    // Positives become Group A, negatives Group B; only media refs cross
    // the boundary (label-blind contract).
    for (const auto& inst : sample_set.positives) req.group_a.push_back(inst.media_ref);
    for (const auto& inst : sample_set.negatives) req.group_b.push_back(inst.media_ref);

    std::string last_problem;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        req.attempt = attempt;
        std::vector<std::string> questions = backend.define(req);
        last_problem = validate_questions(questions, k);
        if (last_problem.empty()) {
            ledger.count_define();
            std::vector<AttributeDefinition> defs;
            defs.reserve(questions.size());
            for (auto& q : questions) defs.push_back(AttributeDefinition::make(std::move(q), iteration));
            return defs;
        }
    }
    throw OracleError("malformed definition response after retries: " + last_problem);
}

void label_instances(const std::vector<Instance>& instances,
                     const std::vector<AttributeDefinition>& attrs, OracleBackend& backend,
                     const OracleConfig& cfg, LabelCache& cache, AttributeMatrix& matrix,
                     QueryLedger& ledger) {
    if (attrs.empty()) throw DataError("label_instances: no attributes");
    for (const auto& a : attrs) matrix.ensure_column(a.attr_id);

    const auto label_one = [&](const Instance& inst) {
        bool any_uncached = false;
        for (const auto& a : attrs) {
            auto cached = cache.get(inst.id, a.attr_id);
            if (cached) {
                matrix.set(inst.id, a.attr_id, *cached);
            } else {
                any_uncached = true;
            }
        }
        if (!any_uncached) return;

        // One batched call carrying every question, cached or not.
        LabelRequest req;
        req.media_ref = inst.media_ref;
        req.template_hash = backend.template_version();
        for (const auto& a : attrs) req.questions.push_back(a.question);

        std::vector<bool> answers;
        std::string problem;
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
            req.attempt = attempt;
            answers = backend.label(req);
            if (answers.size() == attrs.size()) {
                problem.clear();
                break;
            }
            problem = "expected " + std::to_string(attrs.size()) + " answers, got " +
                      std::to_string(answers.size());
        }
        if (!problem.empty())
            throw OracleError("malformed label response for '" + inst.id + "': " + problem);

        ledger.count_label();
        for (std::size_t j = 0; j < attrs.size(); ++j) {
            const auto& a = attrs[j];
            if (!cache.get(inst.id, a.attr_id))
                cache.put({inst.id, a.attr_id, answers[j], backend.id(), timestamp_now()});
            matrix.set(inst.id, a.attr_id, answers[j]);
        }
    };

    const int workers =
        std::min<int>(cfg.parallelism, static_cast<int>(instances.size()));
    if (workers <= 1) {
        for (const auto& inst : instances) label_one(inst);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= instances.size()) return;
                try {
                    label_one(instances[i]);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace attrboost
