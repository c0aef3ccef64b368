#pragma once

// Run configuration: [kernel] [hawkes] [claims] [contract] [numerics] blocks,
// read from TOML or JSON. Schema violations raise SchemaError naming the field.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hawkes/claims.hpp"
#include "hawkes/expansion.hpp"
#include "hawkes/kernel.hpp"

namespace hawkes {

struct SchemaError : std::runtime_error {
    SchemaError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_path(field) {}
    std::string field_path;
};

struct Numerics {
    std::uint64_t seed = 1;
    std::size_t paths = 100000;           // oracle paths
    std::size_t order = 0;                // expansion order M, 0 = automatic
    std::size_t max_order = 40;
    std::size_t samples_per_term = 20000;
    std::size_t inner_draws = 64;
    std::size_t n_terms = 0;              // bound series terms, 0 = automatic
    std::size_t p_max = 200;
    std::size_t bound_samples = 20000;
    double volterra_step = 0.0;           // 0 = T / 2000
    std::size_t mphi_order = 6;
    std::size_t mphi_samples = 200000;
    MPhiMethod mphi_method = MPhiMethod::automatic;
    std::size_t simulate_paths = 10;
    std::size_t validate_paths = 20000;
    double validate_sigma = 4.0;
    std::optional<double> severity_floor;
};

struct RunConfig {
    HawkesParams params;
    ClaimModel model;
    std::optional<Contract> contract;
    Numerics numerics;
    nlohmann::json echo;
};

/// Parses by extension: .toml, otherwise JSON (a file starting with '{' is JSON regardless).
RunConfig load_config(const std::filesystem::path& file);
RunConfig parse_config(const nlohmann::json& doc);
/// TOML text to the equivalent JSON document.
nlohmann::json toml_to_json(const std::string& text, const std::string& source = "config");

}  // namespace hawkes
