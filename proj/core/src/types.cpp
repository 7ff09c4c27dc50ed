#include "attrboost/types.hpp"

#include <openssl/sha.h>

#include <cctype>
#include <cmath>
#include <unordered_set>

namespace attrboost {

Dataset::Dataset(std::vector<Instance> instances) : instances_(std::move(instances)) {
    if (instances_.size() < 2) throw DataError("dataset needs at least 2 instances");
    std::unordered_set<std::string> seen;
    for (const auto& inst : instances_) {
        if (inst.label != -1 && inst.label != 1)
            throw DataError("instance '" + inst.id + "' has label outside {-1,+1}");
        if (!seen.insert(inst.id).second)
            throw DataError("duplicate instance id '" + inst.id + "'");
        if (inst.label == 1) ++positives_;
    }
    if (positives_ == 0 || positives_ == instances_.size())
        throw DataError("dataset must contain at least one instance of each class");
}

std::string normalize_question(const std::string& question) {
    std::string out;
    out.reserve(question.size());
    bool in_space = true;  // also trims leading whitespace
    for (unsigned char c : question) {
        if (std::isspace(c)) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(static_cast<char>(std::tolower(c)));
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string attr_id_for(const std::string& question) {
    const std::string norm = normalize_question(question);
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(norm.data()), norm.size(), digest);
    static const char hex[] = "0123456789abcdef";
    std::string id;
    id.reserve(16);
    for (int i = 0; i < 8; ++i) {  // 8 bytes -> 16 hex chars
        id.push_back(hex[digest[i] >> 4]);
        id.push_back(hex[digest[i] & 0xf]);
    }
    return id;
}

AttributeDefinition AttributeDefinition::make(std::string question, int iteration) {
    if (normalize_question(question).empty())
        throw DataError("attribute question must be non-empty");
    if (iteration < 1) throw DataError("attribute iteration must be >= 1");
    AttributeDefinition def;
    def.attr_id = attr_id_for(question);
    def.iteration = iteration;
    def.question = std::move(question);
    return def;
}

AttributeMatrix::AttributeMatrix(std::vector<std::string> instance_ids)
    : instance_ids_(std::move(instance_ids)) {
    for (std::size_t i = 0; i < instance_ids_.size(); ++i) {
        if (!row_of_.emplace(instance_ids_[i], i).second)
            throw DataError("duplicate row id in attribute matrix");
    }
}

void AttributeMatrix::ensure_column(const std::string& attr_id) {
    if (col_of_.contains(attr_id)) return;
    const std::size_t new_cols = attr_ids_.size() + 1;
    std::vector<std::int8_t> cells(instance_ids_.size() * new_cols,
                                   static_cast<std::int8_t>(Answer::Pending));
    for (std::size_t r = 0; r < instance_ids_.size(); ++r)
        for (std::size_t c = 0; c + 1 < new_cols; ++c)
            cells[r * new_cols + c] = cells_[r * attr_ids_.size() + c];
    col_of_.emplace(attr_id, attr_ids_.size());
    attr_ids_.push_back(attr_id);
    cells_ = std::move(cells);
}

std::size_t AttributeMatrix::row_index(const std::string& instance_id) const {
    auto it = row_of_.find(instance_id);
    if (it == row_of_.end()) throw DataError("unknown instance id '" + instance_id + "'");
    return it->second;
}

std::size_t AttributeMatrix::col_index(const std::string& attr_id) const {
    auto it = col_of_.find(attr_id);
    if (it == col_of_.end()) throw DataError("unknown attr_id '" + attr_id + "'");
    return it->second;
}

bool AttributeMatrix::has_column(const std::string& attr_id) const {
    return col_of_.contains(attr_id);
}

void AttributeMatrix::set(const std::string& instance_id, const std::string& attr_id, bool yes) {
    cells_[row_index(instance_id) * attr_ids_.size() + col_index(attr_id)] =
        static_cast<std::int8_t>(yes ? Answer::Yes : Answer::No);
}

Answer AttributeMatrix::get(const std::string& instance_id, const std::string& attr_id) const {
    return static_cast<Answer>(
        cells_[row_index(instance_id) * attr_ids_.size() + col_index(attr_id)]);
}

void AttributeMatrix::require_complete(const std::vector<std::string>& attr_ids) const {
    for (const auto& attr : attr_ids) {
        const std::size_t c = col_index(attr);
        for (std::size_t r = 0; r < instance_ids_.size(); ++r)
            if (static_cast<Answer>(cells_[r * attr_ids_.size() + c]) == Answer::Pending)
                throw DataError("pending cell (" + instance_ids_[r] + ", " + attr + ")");
    }
}

std::vector<int> AttributeMatrix::column_votes(const std::string& attr_id) const {
    const std::size_t c = col_index(attr_id);
    std::vector<int> votes(instance_ids_.size());
    for (std::size_t r = 0; r < instance_ids_.size(); ++r) {
        const auto a = static_cast<Answer>(cells_[r * attr_ids_.size() + c]);
        if (a == Answer::Pending)
            throw DataError("pending cell consumed in column '" + attr_id + "'");
        votes[r] = (a == Answer::Yes) ? +1 : -1;
    }
    return votes;
}

WeightVector WeightVector::uniform(std::size_t n) {
    return normalized(std::vector<double>(n, 1.0));
}

WeightVector WeightVector::normalized(std::vector<double> raw) {
    if (raw.empty()) throw DataError("weight vector must be non-empty");
    double total = 0.0;
    for (double w : raw) {
        if (!(w > 0.0) || !std::isfinite(w))
            throw DataError("weights must be positive and finite");
        total += w;
    }
    WeightVector v;
    v.w_ = std::move(raw);
    for (double& w : v.w_) w /= total;
    return v;
}

double WeightVector::sum() const {
    double s = 0.0;
    for (double w : w_) s += w;
    return s;
}

double WeightVector::entropy() const {
    double h = 0.0;
    for (double w : w_)
        if (w > 0.0) h -= w * std::log(w);
    return h;
}

const AttributeDefinition& EnsembleModel::attribute(const std::string& attr_id) const {
    for (const auto& a : attributes)
        if (a.attr_id == attr_id) return a;
    throw DataError("model references unknown attr_id '" + attr_id + "'");
}

std::vector<std::string> EnsembleModel::referenced_attr_ids() const {
    std::vector<std::string> ids;
    std::unordered_set<std::string> seen;
    for (const auto& round : rounds)
        if (seen.insert(round.stump.attr_id).second) ids.push_back(round.stump.attr_id);
    return ids;
}

void EnsembleModel::validate() const {
    for (const auto& round : rounds) {
        attribute(round.stump.attr_id);  // throws if missing
        if (round.stump.polarity != 1 && round.stump.polarity != -1)
            throw DataError("stump polarity must be +1 or -1");
        if (!std::isfinite(round.alpha)) throw DataError("non-finite alpha in model");
    }
}

}  // namespace attrboost
