#include "attrboost/scripted_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "attrboost/rng.hpp"

namespace attrboost {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a_seed(std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int i = 0; i < 8; ++i) {
        h ^= (seed >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double hash_uniform(std::uint64_t key) {
    Rng rng(key);
    return rng.uniform();
}

}  // namespace

ScriptedOracle::ScriptedOracle(int hidden_dims, double eta, std::uint64_t seed)
    : hidden_dims_(hidden_dims), eta_(eta), seed_(seed) {
    if (hidden_dims < 1) throw ConfigError("scripted oracle needs hidden_dims >= 1");
    if (!(eta >= 0.0 && eta < 0.5)) throw ConfigError("scripted oracle eta must be in [0, 0.5)");
}

void ScriptedOracle::bind(const std::string& media_ref, std::vector<std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != hidden_dims_)
        throw DataError("bind: bit vector length != hidden_dims");
    std::lock_guard lock(mutex_);
    world_[media_ref] = std::move(bits);
}

std::vector<std::uint8_t> ScriptedOracle::bits_for(const std::string& media_ref) {
    {
        std::lock_guard lock(mutex_);
        auto it = world_.find(media_ref);
        if (it != world_.end()) return it->second;
    }
    if (!auto_bind_) throw OracleError("scripted oracle: unknown media ref '" + media_ref + "'");
    std::vector<std::uint8_t> bits(hidden_dims_);
    for (int d = 0; d < hidden_dims_; ++d) {
        const std::uint64_t key = fnv1a(fnv1a_seed(seed_ ^ 0xa5a5a5a5ULL), media_ref) + d;
        bits[d] = hash_uniform(key) < 0.5 ? 1 : 0;
    }
    return bits;
}

std::string ScriptedOracle::question_for_dim(int dim, int variant) {
    std::string q = "Does the recording exhibit hidden property " + std::to_string(dim);
    if (variant > 0) q += " (probe " + std::to_string(variant) + ")";
    return q + "?";
}

int ScriptedOracle::dim_of_question(const std::string& question) {
    const std::string norm = normalize_question(question);
    const std::string marker = "hidden property ";
    const auto pos = norm.find(marker);
    if (pos == std::string::npos) return -1;
    std::size_t i = pos + marker.size();
    if (i >= norm.size() || !std::isdigit(static_cast<unsigned char>(norm[i]))) return -1;
    int dim = 0;
    while (i < norm.size() && std::isdigit(static_cast<unsigned char>(norm[i]))) {
        dim = dim * 10 + (norm[i] - '0');
        ++i;
    }
    return dim;
}

std::vector<std::string> ScriptedOracle::define(const DefinitionRequest& req) {
    if (req.k < 1) throw OracleError("scripted define: k < 1");
    if (req.group_a.empty() || req.group_b.empty())
        throw OracleError("scripted define: empty group");

    // Rank dims by how strongly they separate the two presented groups.
    std::vector<double> mean_a(hidden_dims_, 0.0), mean_b(hidden_dims_, 0.0);
    for (const auto& ref : req.group_a) {
        const auto bits = bits_for(ref);
        for (int d = 0; d < hidden_dims_; ++d) mean_a[d] += bits[d];
    }
    for (const auto& ref : req.group_b) {
        const auto bits = bits_for(ref);
        for (int d = 0; d < hidden_dims_; ++d) mean_b[d] += bits[d];
    }
    std::vector<int> dims(hidden_dims_);
    for (int d = 0; d < hidden_dims_; ++d) dims[d] = d;
    std::vector<double> score(hidden_dims_);
    for (int d = 0; d < hidden_dims_; ++d)
        score[d] = std::abs(mean_a[d] / req.group_a.size() - mean_b[d] / req.group_b.size());
    std::stable_sort(dims.begin(), dims.end(),
                     [&](int a, int b) { return score[a] > score[b]; });

    const int top = std::min(hidden_dims_, req.k);
    std::vector<std::string> questions;
    questions.reserve(req.k);
    for (int j = 0; j < req.k; ++j)
        questions.push_back(question_for_dim(dims[j % top], j / top));
    return questions;
}

std::vector<bool> ScriptedOracle::label(const LabelRequest& req) {
    const auto bits = bits_for(req.media_ref);
    std::vector<bool> answers;
    answers.reserve(req.questions.size());
    for (const auto& q : req.questions) {
        const std::string norm = normalize_question(q);
        const int dim = dim_of_question(q);
        bool base;
        if (dim >= 0 && dim < hidden_dims_) {
            base = bits[dim] != 0;
        } else {
            // Foreign question: answer a stable pseudo-random bit.
            base = hash_uniform(fnv1a(fnv1a(fnv1a_seed(seed_ ^ 0x5151ULL), req.media_ref), norm)) < 0.5;
        }
        bool flip = false;
        if (eta_ > 0.0) {
            const std::uint64_t key =
                fnv1a(fnv1a(fnv1a_seed(seed_ ^ 0xf11bULL), req.media_ref), norm);
            flip = hash_uniform(key) < eta_;
        }
        answers.push_back(base != flip);
    }
    return answers;
}

}  // namespace attrboost
