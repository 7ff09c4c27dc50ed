#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "attrboost/config.hpp"
#include "attrboost/errors.hpp"

namespace attrboost {

/// One labeled media item. `media_ref` is opaque (file path, URI, or a
/// synthetic locator) and is forwarded untouched to oracle backends.
struct Instance {
    std::string id;
    std::string media_ref;
    int label = 0;  // always -1 or +1 internally
};

/// Ordered, immutable collection of instances. Index i is the instance
/// identity used by the sampling and weight machinery, so order is fixed
/// at construction.
class Dataset {
public:
    explicit Dataset(std::vector<Instance> instances);

    const std::vector<Instance>& instances() const { return instances_; }
    const Instance& at(std::size_t i) const { return instances_[i]; }
    std::size_t size() const { return instances_.size(); }
    std::size_t positives() const { return positives_; }
    std::size_t negatives() const { return instances_.size() - positives_; }

private:
    std::vector<Instance> instances_;
    std::size_t positives_ = 0;
};

/// Lowercase, trim, collapse internal whitespace runs to single spaces.
std::string normalize_question(const std::string& question);

/// Stable attribute id: SHA-256 of the normalized question, first 16 hex chars.
std::string attr_id_for(const std::string& question);

/// A yes/no natural-language question discovered at iteration t.
struct AttributeDefinition {
    std::string attr_id;
    int iteration = 0;
    std::string question;

    static AttributeDefinition make(std::string question, int iteration);

    bool operator==(const AttributeDefinition&) const = default;
};

enum class Answer : std::int8_t { No = 0, Yes = 1, Pending = 2 };

/// N x M tri-state answer matrix (instances x attributes).
class AttributeMatrix {
public:
    explicit AttributeMatrix(std::vector<std::string> instance_ids);

    /// Adds a column initialized to Pending. No-op if the attr_id exists.
    void ensure_column(const std::string& attr_id);

    void set(const std::string& instance_id, const std::string& attr_id, bool yes);
    Answer get(const std::string& instance_id, const std::string& attr_id) const;

    /// Throws DataError if any (row, attr) cell is still Pending.
    void require_complete(const std::vector<std::string>& attr_ids) const;

    std::size_t rows() const { return instance_ids_.size(); }
    std::size_t cols() const { return attr_ids_.size(); }
    const std::vector<std::string>& instance_ids() const { return instance_ids_; }
    const std::vector<std::string>& attr_ids() const { return attr_ids_; }
    std::size_t row_index(const std::string& instance_id) const;
    std::size_t col_index(const std::string& attr_id) const;
    bool has_column(const std::string& attr_id) const;

    /// Column as +1 (yes) / -1 (no) votes, in row order. No Pending allowed.
    std::vector<int> column_votes(const std::string& attr_id) const;

private:
    std::vector<std::string> instance_ids_;
    std::vector<std::string> attr_ids_;
    std::unordered_map<std::string, std::size_t> row_of_;
    std::unordered_map<std::string, std::size_t> col_of_;
    std::vector<std::int8_t> cells_;  // rows * cols, row-major
};

/// Per-instance sampling weights forming a probability distribution.
class WeightVector {
public:
    static WeightVector uniform(std::size_t n);

    /// Normalizes `raw` to sum 1. All entries must be positive and finite.
    static WeightVector normalized(std::vector<double> raw);

    const std::vector<double>& values() const { return w_; }
    double operator[](std::size_t i) const { return w_[i]; }
    std::size_t size() const { return w_.size(); }
    double sum() const;

    /// Shannon entropy in nats; diagnostic for the training trace.
    double entropy() const;

private:
    WeightVector() = default;
    std::vector<double> w_;
};

/// One-split weak classifier over a binary attribute column.
/// polarity=+1 predicts +1 on "yes"; polarity=-1 predicts +1 on "no".
struct Stump {
    std::string attr_id;
    int polarity = +1;

    int predict(Answer a) const {
        int vote = (a == Answer::Yes) ? +1 : -1;
        return polarity * vote;
    }

    bool operator==(const Stump&) const = default;
};

struct BoostRound {
    Stump stump;
    double alpha = 0.0;
};

/// The trained ensemble: ordered (stump, alpha) rounds plus the attribute
/// dictionary they reference and a snapshot of the config that produced them.
struct EnsembleModel {
    std::vector<BoostRound> rounds;
    std::vector<AttributeDefinition> attributes;
    TrainConfig config_snapshot;

    const AttributeDefinition& attribute(const std::string& attr_id) const;

    /// attr_ids referenced by at least one stump, in first-use order.
    std::vector<std::string> referenced_attr_ids() const;

    void validate() const;
};

}  // namespace attrboost
