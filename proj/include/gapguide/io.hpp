#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

namespace gapguide::io {

/// 64-bit FNV-1a hash.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view data);
[[nodiscard]] std::string hex64(std::uint64_t v);

/// Shortest round-trip decimal form of a double ("nan"/"inf" for non-finite).
[[nodiscard]] std::string num(double v);

/// Writes text, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
[[nodiscard]] std::string read_text(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
[[nodiscard]] nlohmann::json read_json(const std::filesystem::path& path);

/// Row-oriented CSV table (UTF-8, header row, '.' decimal separator).
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row);
    [[nodiscard]] std::string str() const;
    void write(const std::filesystem::path& path) const { write_text(path, str()); }
    [[nodiscard]] const std::vector<std::string>& header() const { return header_; }
    [[nodiscard]] const std::vector<std::vector<std::string>>& rows() const { return rows_; }

    /// Parses a table written by `str()` (no quoting support).
    static CsvTable read(const std::filesystem::path& path);
    [[nodiscard]] int column(const std::string& name) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Dumps a complex field as interleaved little-endian float64 (`<base>.bin`)
/// with a JSON header (`<base>.json`) carrying shape and layout metadata.
void write_field(const std::filesystem::path& base, const Eigen::VectorXcd& values, nlohmann::json header);
/// Reads a field written by `write_field`; returns the header.
nlohmann::json read_field(const std::filesystem::path& base, Eigen::VectorXcd& values);

}  // namespace gapguide::io
