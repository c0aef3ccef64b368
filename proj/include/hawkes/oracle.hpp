#pragma once

// Plain Monte Carlo over independent standard paths; path i uses RngStream{seed, i}.

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "hawkes/claims.hpp"
#include "hawkes/kernel.hpp"

namespace hawkes {

struct OracleEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

/// Mean and standard error of h(L_T) K_T.
OracleEstimate mc_premium(const Contract& contract, const HawkesParams& params, const ClaimModel& model,
                          std::size_t n_paths, std::uint64_t seed);

struct TailPoint {
    double threshold;
    double probability;  // P[L_T >= threshold]
    double std_error;
};

/// Thresholds must be sorted ascending.
std::vector<TailPoint> mc_tail(const HawkesParams& params, const ClaimModel& model,
                               const std::vector<double>& thresholds, std::size_t n_paths, std::uint64_t seed);

nlohmann::json to_json(const OracleEstimate& e);

}  // namespace hawkes
