#pragma once

#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "attrboost/oracle.hpp"

namespace attrboost {

/// Deterministic synthetic backend. Each media_ref maps to a hidden vector
/// of D binary features ("the acoustic reality"); questions are bound to
/// hidden dims and answered from the bits, flipped with probability eta.
///
/// Flip decisions are keyed by (seed, media_ref, question), so the same
/// cell always gets the same answer — consistent with the write-once cache.
///
/// The definition role peeks at the hidden bits of the presented samples
/// only (never at class labels) and emits questions bound to the most
/// group-separating dims.
class ScriptedOracle : public OracleBackend {
public:
    ScriptedOracle(int hidden_dims, double eta, std::uint64_t seed);

    std::string id() const override { return "scripted"; }

    /// Registers the hidden bits behind a media reference.
    void bind(const std::string& media_ref, std::vector<std::uint8_t> bits);

    /// Unknown media refs get auto-derived pseudo-random bits when true
    /// (default). When false, labeling an unbound ref is an OracleError.
    void set_auto_bind(bool enabled) { auto_bind_ = enabled; }

    std::vector<std::string> define(const DefinitionRequest& req) override;
    std::vector<bool> label(const LabelRequest& req) override;

    static std::string question_for_dim(int dim, int variant);

    /// Parses the dim index out of a generated question; -1 if not ours.
    static int dim_of_question(const std::string& question);

    int hidden_dims() const { return hidden_dims_; }
    double eta() const { return eta_; }

private:
    std::vector<std::uint8_t> bits_for(const std::string& media_ref);

    int hidden_dims_;
    double eta_;
    std::uint64_t seed_;
    bool auto_bind_ = true;
    std::unordered_map<std::string, std::vector<std::uint8_t>> world_;
    mutable std::mutex mutex_;
};

}  // namespace attrboost
