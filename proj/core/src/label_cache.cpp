#include "attrboost/label_cache.hpp"

#include <fstream>
#include <mutex>

#include <json.hpp>

namespace attrboost {

namespace {

nlohmann::json to_json(const LabelCacheEntry& e) {
    return {{"instance_id", e.instance_id},
            {"attr_id", e.attr_id},
            {"value", e.yes ? "yes" : "no"},
            {"backend", e.backend},
            {"ts", e.ts}};
}

LabelCacheEntry from_json(const nlohmann::json& j) {
    LabelCacheEntry e;
    e.instance_id = j.at("instance_id").get<std::string>();
    e.attr_id = j.at("attr_id").get<std::string>();
    const std::string v = j.at("value").get<std::string>();
    if (v != "yes" && v != "no") throw CacheError("cache value must be yes/no, got '" + v + "'");
    e.yes = (v == "yes");
    e.backend = j.value("backend", "");
    e.ts = j.value("ts", "");
    return e;
}

}  // namespace

std::string LabelCache::key(const std::string& instance_id, const std::string& attr_id) {
    return instance_id + "\x1f" + attr_id;
}

LabelCache::LabelCache(const std::string& path) : path_(path) {
    std::ifstream in(path_);
    if (in) {
        std::string line;
        while (std::getline(in, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            LabelCacheEntry e;
            try {
                e = from_json(nlohmann::json::parse(line));
            } catch (const nlohmann::json::exception& ex) {
                throw CacheError("corrupt cache journal line: " + std::string(ex.what()));
            }
            auto [it, inserted] = entries_.emplace(key(e.instance_id, e.attr_id), e);
            if (!inserted && it->second.yes != e.yes)
                throw CacheError("conflicting journal entries for (" + e.instance_id + ", " +
                                 e.attr_id + ")");
        }
    }
    compact();
}

std::optional<bool> LabelCache::get(const std::string& instance_id,
                                    const std::string& attr_id) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key(instance_id, attr_id));
    if (it == entries_.end()) return std::nullopt;
    return it->second.yes;
}

void LabelCache::put(const LabelCacheEntry& entry) {
    std::unique_lock lock(mutex_);
    auto [it, inserted] = entries_.emplace(key(entry.instance_id, entry.attr_id), entry);
    if (!inserted) {
        if (it->second.yes != entry.yes)
            throw CacheError("write-once violation for (" + entry.instance_id + ", " +
                             entry.attr_id + ")");
        return;  // identical re-put
    }
    append_line(entry);
}

void LabelCache::append_line(const LabelCacheEntry& entry) {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw CacheError("cannot append to cache journal '" + path_ + "'");
    out << to_json(entry).dump() << '\n';
    if (!out) throw CacheError("write failure on cache journal '" + path_ + "'");
}

std::size_t LabelCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

void LabelCache::compact() {
    if (path_.empty()) return;
    std::unique_lock lock(mutex_);
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw CacheError("cannot rewrite cache journal '" + path_ + "'");
    for (const auto& [k, e] : entries_) out << to_json(e).dump() << '\n';
    if (!out) throw CacheError("write failure on cache journal '" + path_ + "'");
}

}  // namespace attrboost
