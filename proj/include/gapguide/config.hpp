#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gapguide/cross_section.hpp"
#include "gapguide/errors.hpp"
#include "gapguide/gap.hpp"
#include "gapguide/media.hpp"

namespace gapguide {

/// Parsed run configuration (JSON, schema version 1). Command blocks are kept
/// as JSON and read through the typed accessors below.
struct RunConfig {
    static constexpr int kVersion = 1;

    nlohmann::json doc;                 // effective document (medium inlined, seed applied)
    std::string hash;                   // FNV-1a 64 of the canonical dump
    std::uint64_t seed = 1;
    int threads = 0;                    // 0 → OpenMP default
    std::filesystem::path out_dir = "out";
    std::filesystem::path base_dir;     // directory of the config file

    [[nodiscard]] bool has(const std::string& block) const { return doc.contains(block) && !doc.at(block).is_null(); }
    /// Command block; ConfigError if missing.
    [[nodiscard]] const nlohmann::json& block(const std::string& name) const;
    [[nodiscard]] MediumSpec medium() const;
    [[nodiscard]] CrossSection cross_section() const;
};

struct ConfigOverrides {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
};

/// Loads and validates a config file. All problems surface as ConfigError.
RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& ov = {});
RunConfig parse_config(nlohmann::json doc, const std::filesystem::path& base_dir, const ConfigOverrides& ov = {});

namespace cfg {

/// Typed field access with ConfigError diagnostics naming the key.
template <class T>
T get(const nlohmann::json& j, const std::string& key, const T& fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

template <class T>
T require(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || j.at(key).is_null()) throw ConfigError("missing required key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad value for '" + key + "': " + e.what());
    }
}

double positive(const nlohmann::json& j, const std::string& key, std::optional<double> fallback = std::nullopt);
int positive_int(const nlohmann::json& j, const std::string& key, std::optional<int> fallback = std::nullopt);
std::optional<GapInterval> gap(const nlohmann::json& j, const std::string& key = "gap");
std::vector<double> number_list(const nlohmann::json& j, const std::string& key, std::vector<double> fallback = {});

}  // namespace cfg

}  // namespace gapguide
