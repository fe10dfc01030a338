#include "gapguide/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const double dx = b[0] - a[0], dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = a[0] + t * dx - p[0], qy = a[1] + t * dy - p[1];
    return std::hypot(qx, qy);
}

// Smallest t > tiny with p + t*d on segment [a,b]; +inf if none.
double ray_segment(const Vec2& p, const Vec2& d, const Vec2& a, const Vec2& b) {
    const double ex = b[0] - a[0], ey = b[1] - a[1];
    const double den = d[0] * ey - d[1] * ex;
    if (std::abs(den) < 1e-14) return kInf;
    const double wx = a[0] - p[0], wy = a[1] - p[1];
    const double t = (wx * ey - wy * ex) / den;
    const double s = (wx * d[1] - wy * d[0]) / den;
    if (t <= 1e-12 || s < -1e-12 || s > 1.0 + 1e-12) return kInf;
    return t;
}

}  // namespace

CrossSection CrossSection::interval(double a, double b) {
    if (!(b > a)) throw ValidationError("interval requires a < b");
    CrossSection cs;
    cs.kind_ = Kind::Interval;
    cs.c_ = {a, b};
    return cs;
}

CrossSection CrossSection::disk(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw ValidationError("disk radius must be positive");
    CrossSection cs;
    cs.kind_ = Kind::Disk;
    cs.c_ = center;
    cs.half_ = {radius, radius};
    return cs;
}

CrossSection CrossSection::rect(Vec2 center, Vec2 half) {
    if (!(half[0] > 0.0 && half[1] > 0.0)) throw ValidationError("rectangle half sizes must be positive");
    CrossSection cs;
    cs.kind_ = Kind::Rect;
    cs.c_ = center;
    cs.half_ = half;
    return cs;
}

CrossSection CrossSection::mask(const std::vector<std::string>& rows, double pixel, Vec2 origin) {
    if (!(pixel > 0.0)) throw ValidationError("mask pixel size must be positive");
    if (rows.empty()) throw ValidationError("empty mask");
    const std::size_t width = rows.front().size();
    for (const auto& r : rows) {
        if (r.size() != width) throw ValidationError("mask rows differ in length");
        for (char ch : r)
            if (ch != '0' && ch != '1') throw ValidationError("mask characters must be 0 or 1");
    }
    if (width == 0) throw ValidationError("empty mask row");
    CrossSection cs;
    cs.kind_ = Kind::Mask;
    cs.rows_ = rows;
    cs.mx_ = static_cast<int>(width);
    cs.my_ = static_cast<int>(rows.size());
    cs.pixel_ = pixel;
    cs.origin_ = origin;
    cs.cells_.assign(static_cast<std::size_t>(cs.mx_) * cs.my_, 0);
    int count = 0;
    for (int r = 0; r < cs.my_; ++r)
        for (int c = 0; c < cs.mx_; ++c) {
            const char v = rows[r][c] == '1';
            cs.cells_[static_cast<std::size_t>(cs.my_ - 1 - r) * cs.mx_ + c] = v;
            count += v;
        }
    if (count == 0) throw ValidationError("mask has no inside pixels");
    cs.build_mask_geometry();
    return cs;
}

CrossSection CrossSection::load_mask(const std::string& path, double pixel, Vec2 origin) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open mask file " + path);
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string row;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) row.push_back(ch);
        if (!row.empty()) rows.push_back(row);
    }
    return mask(rows, pixel, origin);
}

bool CrossSection::pixel(int ix, int iy) const {
    if (ix < 0 || iy < 0 || ix >= mx_ || iy >= my_) return false;
    return cells_[static_cast<std::size_t>(iy) * mx_ + ix] != 0;
}

void CrossSection::build_mask_geometry() {
    segments_.clear();
    const double s = pixel_;
    for (int iy = 0; iy <= my_; ++iy)
        for (int ix = 0; ix < mx_; ++ix)
            if (pixel(ix, iy) != pixel(ix, iy - 1))
                segments_.push_back({{origin_[0] + ix * s, origin_[1] + iy * s},
                                     {origin_[0] + (ix + 1) * s, origin_[1] + iy * s}});
    for (int ix = 0; ix <= mx_; ++ix)
        for (int iy = 0; iy < my_; ++iy)
            if (pixel(ix, iy) != pixel(ix - 1, iy))
                segments_.push_back({{origin_[0] + ix * s, origin_[1] + iy * s},
                                     {origin_[0] + ix * s, origin_[1] + (iy + 1) * s}});
    // Inradius by sampling a 4x sub-pixel lattice.
    inradius_ = 0.0;
    const int sub = 4;
    for (int iy = 0; iy < my_ * sub; ++iy)
        for (int ix = 0; ix < mx_ * sub; ++ix) {
            const Vec2 p{origin_[0] + (ix + 0.5) * s / sub, origin_[1] + (iy + 0.5) * s / sub};
            if (!contains(p)) continue;
            const double d = boundary_distance(p);
            if (d > inradius_) {
                inradius_ = d;
                incenter_ = p;
            }
        }
}

std::string CrossSection::name() const {
    switch (kind_) {
        case Kind::Interval: return "interval";
        case Kind::Disk: return "disk";
        case Kind::Rect: return "rect";
        case Kind::Mask: return "mask";
    }
    return "unknown";
}

bool CrossSection::contains(const Vec2& p) const {
    switch (kind_) {
        case Kind::Interval: return p[0] > c_[0] && p[0] < c_[1];
        case Kind::Disk: return std::hypot(p[0] - c_[0], p[1] - c_[1]) < half_[0];
        case Kind::Rect: return std::abs(p[0] - c_[0]) < half_[0] && std::abs(p[1] - c_[1]) < half_[1];
        case Kind::Mask: {
            const double fx = (p[0] - origin_[0]) / pixel_, fy = (p[1] - origin_[1]) / pixel_;
            const int ix = static_cast<int>(std::floor(fx)), iy = static_cast<int>(std::floor(fy));
            if (!pixel(ix, iy)) return false;
            // points exactly on an outer pixel edge are not interior
            return mask_edge_distance(p) > 1e-14;
        }
    }
    return false;
}

double CrossSection::mask_edge_distance(const Vec2& p) const {
    double d = kInf;
    for (const auto& sgm : segments_) d = std::min(d, point_segment_distance(p, sgm.a, sgm.b));
    return d;
}

double CrossSection::boundary_distance(const Vec2& p) const {
    if (!contains(p)) return 0.0;
    switch (kind_) {
        case Kind::Interval: return std::min(p[0] - c_[0], c_[1] - p[0]);
        case Kind::Disk: return half_[0] - std::hypot(p[0] - c_[0], p[1] - c_[1]);
        case Kind::Rect:
            return std::min(half_[0] - std::abs(p[0] - c_[0]), half_[1] - std::abs(p[1] - c_[1]));
        case Kind::Mask: return mask_edge_distance(p);
    }
    return 0.0;
}

double CrossSection::distance_to(const Vec2& p) const {
    if (contains(p)) return 0.0;
    switch (kind_) {
        case Kind::Interval: return p[0] <= c_[0] ? c_[0] - p[0] : std::max(0.0, p[0] - c_[1]);
        case Kind::Disk: return std::max(0.0, std::hypot(p[0] - c_[0], p[1] - c_[1]) - half_[0]);
        case Kind::Rect: {
            const double dx = std::max(0.0, std::abs(p[0] - c_[0]) - half_[0]);
            const double dy = std::max(0.0, std::abs(p[1] - c_[1]) - half_[1]);
            return std::hypot(dx, dy);
        }
        case Kind::Mask: return mask_edge_distance(p);
    }
    return 0.0;
}

double CrossSection::exit_distance(const Vec2& p, const Vec2& dir) const {
    switch (kind_) {
        case Kind::Interval:
            if (dir[0] > 0.0) return (c_[1] - p[0]) / dir[0];
            if (dir[0] < 0.0) return (c_[0] - p[0]) / dir[0];
            throw ValidationError("zero direction for interval exit distance");
        case Kind::Disk: {
            const double px = p[0] - c_[0], py = p[1] - c_[1];
            const double a = dir[0] * dir[0] + dir[1] * dir[1];
            const double b = 2.0 * (px * dir[0] + py * dir[1]);
            const double c = px * px + py * py - half_[0] * half_[0];
            const double disc = std::max(0.0, b * b - 4.0 * a * c);
            return (-b + std::sqrt(disc)) / (2.0 * a);
        }
        case Kind::Rect: {
            double t = kInf;
            for (int ax = 0; ax < 2; ++ax) {
                if (dir[ax] > 0.0) t = std::min(t, (c_[ax] + half_[ax] - p[ax]) / dir[ax]);
                if (dir[ax] < 0.0) t = std::min(t, (c_[ax] - half_[ax] - p[ax]) / dir[ax]);
            }
            return t;
        }
        case Kind::Mask: {
            double t = kInf;
            for (const auto& sgm : segments_) t = std::min(t, ray_segment(p, dir, sgm.a, sgm.b));
            if (!std::isfinite(t)) throw GeometryError("ray does not leave the mask");
            return t;
        }
    }
    return 0.0;
}

Box2 CrossSection::bounds() const {
    switch (kind_) {
        case Kind::Interval: return {{c_[0], 0.0}, {c_[1], 0.0}};
        case Kind::Disk:
        case Kind::Rect: return {{c_[0] - half_[0], c_[1] - half_[1]}, {c_[0] + half_[0], c_[1] + half_[1]}};
        case Kind::Mask: {
            Box2 b{{kInf, kInf}, {-kInf, -kInf}};
            for (const auto& sgm : segments_)
                for (const auto& q : {sgm.a, sgm.b})
                    for (int ax = 0; ax < 2; ++ax) {
                        b.lo[ax] = std::min(b.lo[ax], q[ax]);
                        b.hi[ax] = std::max(b.hi[ax], q[ax]);
                    }
            return b;
        }
    }
    return {};
}

double CrossSection::inradius() const {
    switch (kind_) {
        case Kind::Interval: return 0.5 * (c_[1] - c_[0]);
        case Kind::Disk: return half_[0];
        case Kind::Rect: return std::min(half_[0], half_[1]);
        case Kind::Mask: return inradius_;
    }
    return 0.0;
}

Vec2 CrossSection::center() const {
    switch (kind_) {
        case Kind::Interval: return {0.5 * (c_[0] + c_[1]), 0.0};
        case Kind::Disk:
        case Kind::Rect: return c_;
        case Kind::Mask: return incenter_;
    }
    return {0.0, 0.0};
}

double CrossSection::measure() const {
    switch (kind_) {
        case Kind::Interval: return c_[1] - c_[0];
        case Kind::Disk: return std::numbers::pi * half_[0] * half_[0];
        case Kind::Rect: return 4.0 * half_[0] * half_[1];
        case Kind::Mask: {
            std::size_t n = 0;
            for (char v : cells_) n += v != 0;
            return static_cast<double>(n) * pixel_ * pixel_;
        }
    }
    return 0.0;
}

double CrossSection::diameter() const {
    switch (kind_) {
        case Kind::Interval: return c_[1] - c_[0];
        case Kind::Disk: return 2.0 * half_[0];
        case Kind::Rect: return 2.0 * std::hypot(half_[0], half_[1]);
        case Kind::Mask: {
            double d = 0.0;
            for (const auto& s1 : segments_)
                for (const auto& s2 : segments_)
                    d = std::max(d, std::hypot(s1.a[0] - s2.a[0], s1.a[1] - s2.a[1]));
            return d;
        }
    }
    return 0.0;
}

bool CrossSection::simply_connected() const {
    if (kind_ != Kind::Mask) return true;
    // Reject corner-only contacts: they pinch the pixel union.
    for (int iy = -1; iy < my_; ++iy)
        for (int ix = -1; ix < mx_; ++ix) {
            const bool a = pixel(ix, iy), b = pixel(ix + 1, iy), c = pixel(ix, iy + 1), d = pixel(ix + 1, iy + 1);
            if ((a && d && !b && !c) || (b && c && !a && !d)) return false;
        }
    // Inside must be one 4-connected component; outside (padded by one ring) too.
    const int W = mx_ + 2, H = my_ + 2;
    auto count_components = [&](bool inside) {
        std::vector<char> seen(static_cast<std::size_t>(W) * H, 0);
        int comps = 0;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x) {
                if (seen[y * W + x] || pixel(x - 1, y - 1) != inside) continue;
                ++comps;
                std::queue<std::pair<int, int>> q;
                q.push({x, y});
                seen[y * W + x] = 1;
                while (!q.empty()) {
                    auto [cx, cy] = q.front();
                    q.pop();
                    const int nb[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
                    for (auto& o : nb) {
                        const int nx = cx + o[0], ny = cy + o[1];
                        if (nx < 0 || ny < 0 || nx >= W || ny >= H) continue;
                        if (seen[ny * W + nx] || pixel(nx - 1, ny - 1) != inside) continue;
                        seen[ny * W + nx] = 1;
                        q.push({nx, ny});
                    }
                }
            }
        return comps;
    };
    return count_components(true) == 1 && count_components(false) == 1;
}

CrossSection CrossSection::scaled(double l) const {
    if (!(l > 0.0)) throw ValidationError("scale must be positive");
    switch (kind_) {
        case Kind::Interval: return interval(l * c_[0], l * c_[1]);
        case Kind::Disk: return disk({l * c_[0], l * c_[1]}, l * half_[0]);
        case Kind::Rect: return rect({l * c_[0], l * c_[1]}, {l * half_[0], l * half_[1]});
        case Kind::Mask: return mask(rows_, l * pixel_, {l * origin_[0], l * origin_[1]});
    }
    return *this;
}

nlohmann::json CrossSection::to_json() const {
    nlohmann::json j;
    j["kind"] = name();
    switch (kind_) {
        case Kind::Interval: j["a"] = c_[0]; j["b"] = c_[1]; break;
        case Kind::Disk: j["center"] = c_; j["radius"] = half_[0]; break;
        case Kind::Rect: j["center"] = c_; j["half"] = half_; break;
        case Kind::Mask: j["rows"] = rows_; j["pixel"] = pixel_; j["origin"] = origin_; break;
    }
    return j;
}

CrossSection CrossSection::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "interval") return interval(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "disk")
        return disk(j.value("center", Vec2{0.0, 0.0}), j.at("radius").get<double>());
    if (kind == "rect") return rect(j.value("center", Vec2{0.0, 0.0}), j.at("half").get<Vec2>());
    if (kind == "mask") {
        const double pixel = j.at("pixel").get<double>();
        const Vec2 origin = j.value("origin", Vec2{0.0, 0.0});
        if (j.contains("path")) return load_mask(j.at("path").get<std::string>(), pixel, origin);
        return mask(j.at("rows").get<std::vector<std::string>>(), pixel, origin);
    }
    throw ValidationError("unknown cross-section kind '" + kind + "'");
}

}  // namespace gapguide
