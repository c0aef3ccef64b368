#pragma once

#include <cstdint>

#include <json.hpp>

#include "hawkes/config.hpp"

namespace hawkes {

/// Runs the invariant suite on one configuration. Each entry of "checks" carries
/// a pass flag; "violations" counts the failed ones.
nlohmann::json run_validation(const RunConfig& cfg, std::uint64_t seed);

}  // namespace hawkes
