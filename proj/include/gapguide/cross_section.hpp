#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "gapguide/grid.hpp"

namespace gapguide {

struct Box2 {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};
};

/// Transverse cross-section Ω of the defect strip: an interval (for 2D media),
/// or a disk, axis-aligned rectangle, or union of mask pixels (for 3D media).
/// Points are passed as Vec2; 1D sections use only the first coordinate.
class CrossSection {
public:
    enum class Kind { Interval, Disk, Rect, Mask };

    static CrossSection interval(double a, double b);
    static CrossSection disk(Vec2 center, double radius);
    static CrossSection rect(Vec2 center, Vec2 half);
    /// `rows[r][c]` is pixel (c, r) counted from the top row; pixel side `pixel`,
    /// lower-left corner of the whole mask at `origin`.
    static CrossSection mask(const std::vector<std::string>& rows, double pixel, Vec2 origin);
    /// Reads an ASCII grid of '0'/'1' characters (whitespace ignored).
    static CrossSection load_mask(const std::string& path, double pixel, Vec2 origin);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return kind_ == Kind::Interval ? 1 : 2; }
    [[nodiscard]] std::string name() const;

    /// Open-set membership.
    [[nodiscard]] bool contains(const Vec2& p) const;
    /// Distance from an interior point to ∂Ω (0 for points outside).
    [[nodiscard]] double boundary_distance(const Vec2& p) const;
    /// Distance from p to the closed set Ω (0 inside).
    [[nodiscard]] double distance_to(const Vec2& p) const;
    /// First t > 0 with p + t·dir on ∂Ω, for interior p and unit dir.
    [[nodiscard]] double exit_distance(const Vec2& p, const Vec2& dir) const;

    [[nodiscard]] Box2 bounds() const;
    [[nodiscard]] double inradius() const;
    /// Area (length for intervals).
    [[nodiscard]] double measure() const;
    [[nodiscard]] double diameter() const;
    [[nodiscard]] bool simply_connected() const;
    /// Point of maximal boundary distance (used as the strip "center").
    [[nodiscard]] Vec2 center() const;
    /// The set lΩ (scaling about the coordinate origin).
    [[nodiscard]] CrossSection scaled(double l) const;

    [[nodiscard]] nlohmann::json to_json() const;
    static CrossSection from_json(const nlohmann::json& j);

private:
    struct Segment {
        Vec2 a, b;
    };
    void build_mask_geometry();
    [[nodiscard]] double mask_edge_distance(const Vec2& p) const;
    [[nodiscard]] bool pixel(int ix, int iy) const;

    Kind kind_ = Kind::Interval;
    Vec2 c_{0.0, 0.0};      // center (disk, rect) or [a, b] (interval)
    Vec2 half_{0.0, 0.0};   // rect half sizes; disk radius in half_[0]
    // mask data
    int mx_ = 0, my_ = 0;
    double pixel_ = 1.0;
    Vec2 origin_{0.0, 0.0};
    std::vector<char> cells_;  // iy-major from the bottom row
    std::vector<Segment> segments_;
    std::vector<std::string> rows_;
    double inradius_ = 0.0;
    Vec2 incenter_{0.0, 0.0};
};

}  // namespace gapguide
