#pragma once

#include <optional>
#include <vector>

#include "json.hpp"

#include "gapguide/cross_section.hpp"
#include "gapguide/grid.hpp"

namespace gapguide {

/// One piecewise-constant inclusion of the periodic bulk, given in unit-cell
/// coordinates; the periodic extension is implicit.
struct Inclusion {
    enum class Shape { Ball, Box, Layer, Rod };
    Shape shape = Shape::Ball;
    Vec3 center{0.0, 0.0, 0.0};
    Vec3 half{0.0, 0.0, 0.0};  // Box half sizes
    double radius = 0.0;       // Ball, Rod
    int axis = 0;              // Layer normal, Rod direction
    double lo = 0.0, hi = 0.0; // Layer extent along `axis`
    double eps = 1.0;

    /// Smallest feature size (diameter / thickness).
    [[nodiscard]] double min_feature() const;
    [[nodiscard]] nlohmann::json to_json() const;
    static Inclusion from_json(const nlohmann::json& j);
};

/// Defect strip S_l = {x : x' ∈ lΩ}, infinite along x₁, with homogeneous ε inside.
struct StripSpec {
    int axis = 0;
    CrossSection cross_section = CrossSection::interval(-1.0, 1.0);
    double l = 1.0;
    double eps_inside = 1.0;

    /// Transverse membership test x' ∈ lΩ.
    [[nodiscard]] bool contains(const Vec2& xt) const {
        return cross_section.contains({xt[0] / l, xt[1] / l});
    }
    /// The scaled set lΩ.
    [[nodiscard]] CrossSection scaled() const { return cross_section.scaled(l); }
    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
    static StripSpec from_json(const nlohmann::json& j);
};

/// Periodic bulk dielectric ε₀ (axis-aligned lattice) plus an optional strip.
struct MediumSpec {
    int dim = 2;
    Vec3 period{1.0, 1.0, 1.0};
    double background = 1.0;
    std::vector<Inclusion> inclusions;
    std::optional<StripSpec> defect;

    /// ε₀ at a point (later inclusions paint over earlier ones).
    [[nodiscard]] double eps_at(const Vec3& x) const;
    /// Bounds c₀ ≤ ε ≤ c₁ over all values the spec can produce.
    [[nodiscard]] double c0() const;
    [[nodiscard]] double c1() const;
    void validate() const;

    [[nodiscard]] nlohmann::json to_json() const;
    static MediumSpec from_json(const nlohmann::json& j);
};

/// Cell-center samples of ε on a grid.
struct SampledEpsilon {
    GridSpec grid;
    Eigen::VectorXd values;
    double c0 = 0.0;
    double c1 = 0.0;
    std::optional<double> bloch_period;  // period a along x₁
    std::optional<StripSpec> strip;

    [[nodiscard]] double at(int i, int j = 0, int k = 0) const { return values[grid.index(i, j, k)]; }
};

/// Indicator window |y_j − x_j| ≤ half_side for all j (a square in 2D).
struct CubeWindow {
    Vec3 center{0.0, 0.0, 0.0};
    double half_side = 1.0;
};

struct WindowNorm {
    double value = 0.0;
    bool empty = true;  // window contained no samples
};

/// Samples ε₀ at cell centers (no defect applied).
SampledEpsilon build_medium(const MediumSpec& spec, const GridSpec& grid);

/// Replaces samples whose transverse coordinate lies in lΩ by ε.
SampledEpsilon with_defect(const SampledEpsilon& eps0, const StripSpec& strip);

/// Discrete L₂ norm of the samples inside the window (midpoint rule, sample
/// weight = lattice cell volume). Axes with `wrap[a] > 0` are treated as
/// periodic with that period (exact for Bloch-mode moduli).
WindowNorm window_norm(const SampleLattice& lattice, const Eigen::VectorXcd& values, const CubeWindow& w,
                       const Vec3& wrap = {0.0, 0.0, 0.0});

/// Squared window norm; building block for multi-component fields.
double window_norm_squared(const SampleLattice& lattice, const Eigen::VectorXcd& values, const CubeWindow& w,
                           const Vec3& wrap, bool* any = nullptr);

}  // namespace gapguide
