#pragma once

#include <stdexcept>
#include <string>

namespace attrboost {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad configuration (unknown keys, out-of-range values).
struct ConfigError : Error {
    using Error::Error;
};

/// Bad input data (manifest, model file, matrix state).
struct DataError : Error {
    using Error::Error;
};

/// Oracle backend failure (network, malformed response, replay miss).
struct OracleError : Error {
    using Error::Error;
};

/// Write-once violation or storage failure in the label cache.
struct CacheError : Error {
    using Error::Error;
};

/// FILTER loop exceeded its call budget without filling the sample set.
struct SamplingStalledError : Error {
    SamplingStalledError(std::string msg, std::size_t positives, std::size_t negatives)
        : Error(std::move(msg)), positives(positives), negatives(negatives) {}
    std::size_t positives;
    std::size_t negatives;
};

}  // namespace attrboost
