#pragma once

#include <iosfwd>
#include <string>

#include "attrboost/types.hpp"

namespace attrboost {

/// Model files are single JSON documents with a schema_version field.
/// Doubles are rendered with 17 significant digits so load(save(m)) is
/// bit-exact on every numeric field.
void save_model(const EnsembleModel& model, const std::string& path);
void save_model(const EnsembleModel& model, std::ostream& out);

EnsembleModel load_model(const std::string& path);
EnsembleModel load_model(std::istream& in, const std::string& source_name = "<stream>");

/// "%.17g" rendering used across all serialized artifacts.
std::string format_double(double v);

}  // namespace attrboost
