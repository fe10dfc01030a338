#include "gapguide/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gapguide/errors.hpp"

namespace gapguide::io {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xF];
    return s;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, r.ptr};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const std::filesystem::path& path) { return nlohmann::json::parse(read_text(path)); }

void CsvTable::add(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw ValidationError("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += cells[i];
        }
        out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        cells.push_back(cur);
        return cells;
    };
    if (!std::getline(in, line)) throw ValidationError("empty CSV file " + path.string());
    CsvTable t(split(line));
    while (std::getline(in, line))
        if (!line.empty()) t.add(split(line));
    return t;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return static_cast<int>(i);
    return -1;
}

void write_field(const std::filesystem::path& base, const Eigen::VectorXcd& values, nlohmann::json header) {
    static_assert(std::endian::native == std::endian::little, "field dumps assume a little-endian host");
    header["dtype"] = "complex128-le-interleaved";
    header["count"] = values.size();
    std::filesystem::path bin = base;
    bin += ".bin";
    header["data"] = bin.filename().string();
    if (bin.has_parent_path()) std::filesystem::create_directories(bin.parent_path());
    std::ofstream f(bin, std::ios::binary);
    if (!f) throw Error("cannot write " + bin.string());
    f.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size() * sizeof(std::complex<double>)));
    std::filesystem::path js = base;
    js += ".json";
    write_json(js, header);
}

nlohmann::json read_field(const std::filesystem::path& base, Eigen::VectorXcd& values) {
    std::filesystem::path js = base;
    js += ".json";
    nlohmann::json header = read_json(js);
    std::filesystem::path bin = base;
    bin += ".bin";
    const auto count = header.at("count").get<Eigen::Index>();
    values.resize(count);
    std::ifstream f(bin, std::ios::binary);
    if (!f) throw Error("cannot read " + bin.string());
    f.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(count * sizeof(std::complex<double>)));
    if (!f) throw Error("truncated field dump " + bin.string());
    return header;
}

}  // namespace gapguide::io
