#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "attrboost/config.hpp"
#include "attrboost/label_cache.hpp"
#include "attrboost/sampling.hpp"
#include "attrboost/types.hpp"

namespace attrboost {

/// Request for k discriminative yes/no questions from two unlabeled groups.
/// Label-blind by construction: media references only, no class information.
struct DefinitionRequest {
    std::vector<std::string> group_a;  // media refs
    std::vector<std::string> group_b;
    int k = 0;
    std::string template_hash;
    int attempt = 0;  // > 0 on corrective retries
};

/// Batched truth-value query: all questions for one instance in one call.
struct LabelRequest {
    std::string media_ref;
    std::vector<std::string> questions;
    std::string template_hash;
    int attempt = 0;
};

std::string to_canonical_json(const DefinitionRequest& req);
std::string to_canonical_json(const LabelRequest& req);

/// Full SHA-256 hex digest, used for replay journal lookups.
std::string sha256_hex(const std::string& data);

/// Attribute oracle: the definition role and the labeling role behind one
/// interface. Implementations must be safe for concurrent label() calls.
class OracleBackend {
public:
    virtual ~OracleBackend() = default;
    virtual std::string id() const = 0;
    virtual std::vector<std::string> define(const DefinitionRequest& req) = 0;
    virtual std::vector<bool> label(const LabelRequest& req) = 0;

    /// Prompt-template version; part of every request hash so template
    /// edits invalidate caches and replay journals.
    virtual std::string template_version() const { return "none"; }
};

/// Counts oracle traffic. One define call per iteration, at most one label
/// call per instance per iteration.
class QueryLedger {
public:
    struct IterationCounts {
        int t = 0;
        long define_calls = 0;
        long label_calls = 0;
    };

    void begin_iteration(int t);
    void count_define();
    void count_label(long n = 1);

    long define_calls() const;
    long label_calls() const;
    std::vector<IterationCounts> per_iteration() const;

private:
    mutable std::mutex mutex_;
    long define_calls_ = 0;
    long label_calls_ = 0;
    std::vector<IterationCounts> per_iteration_;
};

/// Drives the definition role: presents the sample set as Group A / Group B,
/// validates the response (k distinct normalized yes/no questions), retrying
/// once per failure up to cfg.max_retries.
std::vector<AttributeDefinition> define_attributes(const SampleSet& sample_set, int k,
                                                   int iteration, OracleBackend& backend,
                                                   const OracleConfig& cfg,
                                                   QueryLedger& ledger);

/// Labels `instances` on `attrs`, writing answers into `matrix`. Cells found
/// in the cache are served without a backend call; every instance with at
/// least one uncached cell costs exactly one batched call. Fans out up to
/// cfg.parallelism concurrent calls.
void label_instances(const std::vector<Instance>& instances,
                     const std::vector<AttributeDefinition>& attrs, OracleBackend& backend,
                     const OracleConfig& cfg, LabelCache& cache, AttributeMatrix& matrix,
                     QueryLedger& ledger);

}  // namespace attrboost
