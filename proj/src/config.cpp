#include "gapguide/config.hpp"

#include <cmath>

#include "gapguide/io.hpp"

namespace gapguide {

const nlohmann::json& RunConfig::block(const std::string& name) const {
    if (!has(name)) throw ConfigError("config has no '" + name + "' block");
    if (!doc.at(name).is_object()) throw ConfigError("'" + name + "' must be an object");
    return doc.at(name);
}

MediumSpec RunConfig::medium() const {
    if (!has("medium")) throw ConfigError("config has no 'medium'");
    try {
        return MediumSpec::from_json(doc.at("medium"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad medium: ") + e.what());
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("bad medium: ") + e.what());
    }
}

CrossSection RunConfig::cross_section() const {
    const nlohmann::json* j = nullptr;
    if (has("cross_section")) {
        j = &doc.at("cross_section");
    } else if (has("medium") && doc.at("medium").contains("defect") && !doc.at("medium").at("defect").is_null()) {
        j = &doc.at("medium").at("defect").at("cross_section");
    }
    if (!j) throw ConfigError("config has no 'cross_section'");
    try {
        nlohmann::json cj = *j;
        if (cj.contains("path")) cj["path"] = (base_dir / cj.at("path").get<std::string>()).string();
        return CrossSection::from_json(cj);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad cross_section: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("bad cross_section: ") + e.what());
    }
}

RunConfig parse_config(nlohmann::json doc, const std::filesystem::path& base_dir, const ConfigOverrides& ov) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    const int version = cfg::get<int>(doc, "version", RunConfig::kVersion);
    if (version != RunConfig::kVersion) throw ConfigError("unsupported config version " + std::to_string(version));
    doc["version"] = version;
    RunConfig rc;
    rc.base_dir = base_dir;

    // Inline a medium given by path so the hash covers its content.
    if (doc.contains("medium") && doc.at("medium").is_string()) {
        const std::filesystem::path mp = base_dir / doc.at("medium").get<std::string>();
        if (!std::filesystem::exists(mp)) throw ConfigError("medium file not found: " + mp.string());
        try {
            doc["medium"] = io::read_json(mp);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("medium file is not valid JSON: " + std::string(e.what()));
        }
    }
    if (doc.contains("cross_section") && doc.at("cross_section").contains("path")) {
        const std::filesystem::path cp = base_dir / doc.at("cross_section").at("path").get<std::string>();
        if (!std::filesystem::exists(cp)) throw ConfigError("mask file not found: " + cp.string());
    }

    const long long seed = ov.seed ? static_cast<long long>(*ov.seed) : cfg::get<long long>(doc, "seed", 1);
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    rc.seed = static_cast<std::uint64_t>(seed);
    doc["seed"] = rc.seed;
    rc.threads = ov.threads ? *ov.threads : cfg::get<int>(doc, "threads", 0);
    if (rc.threads < 0) throw ConfigError("threads must be nonnegative");
    rc.out_dir = ov.out ? *ov.out : base_dir / cfg::get<std::string>(doc, "out", "out");
    rc.doc = std::move(doc);
    nlohmann::json hashed = rc.doc;
    hashed.erase("out");
    hashed.erase("threads");
    rc.hash = io::hex64(io::fnv1a64(hashed.dump()));

    if (rc.has("medium")) (void)rc.medium();
    if (rc.has("cross_section")) (void)rc.cross_section();
    return rc;
}

RunConfig load_config(const std::filesystem::path& path, const ConfigOverrides& ov) {
    if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(io::read_text(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(std::move(doc), path.parent_path(), ov);
}

namespace cfg {

double positive(const nlohmann::json& j, const std::string& key, std::optional<double> fallback) {
    const double v = fallback ? get<double>(j, key, *fallback) : require<double>(j, key);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("'" + key + "' must be positive and finite");
    return v;
}

int positive_int(const nlohmann::json& j, const std::string& key, std::optional<int> fallback) {
    const int v = fallback ? get<int>(j, key, *fallback) : require<int>(j, key);
    if (v < 1) throw ConfigError("'" + key + "' must be a positive integer");
    return v;
}

std::optional<GapInterval> gap(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto v = get<std::vector<double>>(j, key, {});
    if (v.size() != 2) throw ConfigError("'" + key + "' must be [alpha, beta]");
    GapInterval g{v[0], v[1]};
    try {
        g.validate();
    } catch (const ValidationError& e) {
        throw ConfigError("'" + key + "': " + e.what());
    }
    return g;
}

std::vector<double> number_list(const nlohmann::json& j, const std::string& key, std::vector<double> fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    if (j.at(key).is_number()) return {j.at(key).get<double>()};
    return get<std::vector<double>>(j, key, fallback);
}

}  // namespace cfg

}  // namespace gapguide
