#pragma once

#include "lrce/model.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace lrce {

struct SimulationSettings {
    std::int64_t entrants = 1000;
    int periods = 500;
    int burn_in = -1;
    std::uint64_t seed = 1;
    int batches = 64;
};

struct RunConfig {
    ModelPrimitives model;
    Index cells = 201;
    double tolerance = 1e-10;
    /// Skip assumption checks (needed for permanent-type surrogates without full support).
    bool bypass_validation = false;
    SimulationSettings simulation;
};

/// Parses and schema-checks a config document; unknown fields are rejected.
/// Throws ConfigError carrying a JSON pointer (or line/column for syntax errors).
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::filesystem::path& path);

/// Canonical document with every default filled in. Key order is sorted, numbers use
/// shortest round-trip formatting, so equal configs serialise to equal bytes.
nlohmann::json canonical_json(const RunConfig& cfg);

/// 64-bit FNV-1a of the canonical serialisation, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

} // namespace lrce
