#pragma once

#include <cstdint>
#include <string>

#include "attrboost/errors.hpp"

namespace attrboost {

/// Knobs for one training run. Defaults are the small-data regime the
/// framework targets: q=10 examples per class per round, k=10 fresh
/// questions per round, T=10 rounds.
struct TrainConfig {
    int q = 10;
    int k = 10;
    int T = 10;
    double delta = 0.1;    // FILTER confidence parameter, constant over t
    double epsilon = 0.1;  // FILTER accuracy parameter
    std::uint64_t seed = 0;
    double gamma_clamp = 0.5 - 1e-6;
    int tie_prediction = +1;  // sign(0) is undefined; this breaks the tie
    bool cumulative_features = false;  // experimental: search all columns, not just round t's
    int r_max_factor = 1000;  // FILTER call budget per round = r_max_factor * t

    void validate() const {
        if (q < 1 || k < 1 || T < 1) throw ConfigError("q, k, T must be >= 1");
        if (!(gamma_clamp > 0.0 && gamma_clamp < 0.5))
            throw ConfigError("gamma_clamp must be in (0, 0.5)");
        if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must be in (0,1)");
        if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must be in (0,1)");
        if (tie_prediction != 1 && tie_prediction != -1)
            throw ConfigError("tie_prediction must be +1 or -1");
        if (r_max_factor < 1) throw ConfigError("r_max_factor must be >= 1");
    }
};

enum class OracleBackendKind { Http, Scripted, Replay };

struct OracleConfig {
    OracleBackendKind backend = OracleBackendKind::Scripted;
    std::string endpoint;    // http only
    std::string model_name;
    double temperature = 1.0;
    int max_retries = 2;
    int parallelism = 1;
    double timeout_sec = 120.0;
    double requests_per_minute = 0.0;  // 0 = unlimited

    void validate() const {
        if (temperature < 0.0) throw ConfigError("temperature must be >= 0");
        if (parallelism < 1) throw ConfigError("parallelism must be >= 1");
        if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
    }
};

}  // namespace attrboost
