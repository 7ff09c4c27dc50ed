#pragma once

#include <iosfwd>
#include <string>

#include "attrboost/types.hpp"

namespace attrboost {

/// Loads a JSON-lines manifest: one {id, media_ref, label} object per line.
/// Labels 0/1 are mapped to -1/+1; -1/+1 pass through. Instance order is
/// file order.
Dataset load_manifest(const std::string& path);
Dataset load_manifest(std::istream& in, const std::string& source_name = "<stream>");

}  // namespace attrboost
