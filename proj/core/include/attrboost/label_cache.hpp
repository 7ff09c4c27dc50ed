#pragma once

#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "attrboost/errors.hpp"

namespace attrboost {

struct LabelCacheEntry {
    std::string instance_id;
    std::string attr_id;
    bool yes = false;
    std::string backend;
    std::string ts;  // ISO-8601, informational only
};

/// Write-once (instance_id, attr_id) -> yes/no store, backed by an
/// append-only JSON-lines journal. The journal is compacted on open:
/// duplicate identical entries collapse, conflicting ones fail the open.
///
/// Concurrent readers are fine; writes are serialized internally.
class LabelCache {
public:
    /// In-memory only (no persistence).
    LabelCache() = default;

    /// Opens or creates the journal at `path`, replaying existing entries.
    explicit LabelCache(const std::string& path);

    std::optional<bool> get(const std::string& instance_id, const std::string& attr_id) const;

    /// Throws CacheError when the key exists with a different value.
    /// Re-putting the identical value is a no-op.
    void put(const LabelCacheEntry& entry);

    std::size_t size() const;

    /// Rewrites the journal with one line per live entry.
    void compact();

    const std::string& path() const { return path_; }

private:
    static std::string key(const std::string& instance_id, const std::string& attr_id);
    void append_line(const LabelCacheEntry& entry);

    std::string path_;  // empty = memory-only
    std::unordered_map<std::string, LabelCacheEntry> entries_;
    mutable std::shared_mutex mutex_;
};

}  // namespace attrboost
