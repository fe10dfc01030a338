#pragma once

#include <string>
#include <vector>

#include "gapguide/gap.hpp"
#include "gapguide/media.hpp"
#include "gapguide/spectrum.hpp"

namespace gapguide {

/// Sample layout of a mode field: one or more component lattices stored
/// back to back, plus the axial period used for window wrapping.
struct FieldLayout {
    std::vector<SampleLattice> components;
    double axial_period = 0.0;  // wrap along x₁ (0 → no wrap)

    [[nodiscard]] std::size_t size() const;
};

/// Layout of a scalar cell-centered field on `eps.grid`.
FieldLayout scalar_layout(const SampledEpsilon& eps);
/// Layout of the three Yee components of a Maxwell field.
FieldLayout maxwell_layout(const MaxwellOperator& op);

struct DecaySample {
    double dist = 0.0;   // dist(x, S_l)
    double norm = 0.0;   // ‖χ_x u‖
    bool in_window = false;
};

struct DecayProfile {
    std::vector<DecaySample> samples;
    double half_side = 1.0;
    Vec2 ray{1.0, 0.0};
    double d_min = 0.0;        // near-field guard
    double guard = 0.0;        // truncation guard (outer 25% of the supercell)
    bool truncated = false;    // the ray reached the grid edge
    double lambda = 0.0, k1 = 0.0;
};

struct ProfileOptions {
    double step = 0.25;
    double half_side = 1.0;
    double outer_fraction = 0.25;  // excluded fraction of the transverse half-extent
};

/// Windowed norms at centers marching outward from ∂(lΩ) along a transverse ray.
DecayProfile profile(const ModeResult& mode, const FieldLayout& layout, const GridSpec& grid, const StripSpec& strip,
                     const Vec2& ray, const ProfileOptions& opt = {});

struct DecayFit {
    double rate = 0.0;       // C(λ) ≥ 0
    double slope = 0.0;      // raw log-linear slope
    double prefactor = 0.0;
    double d_min = 0.0, d_max = 0.0;
    double r2 = 0.0;
    double truncation_guard = 0.0;
    int used = 0;
    int excluded = 0;        // nonpositive norms inside the window
    std::string model = "pure exponential (axially Bloch-periodic modes)";
};

/// Least squares on (dist, log norm) over the guarded window; rate = max(0, −slope).
DecayFit fit_decay(const DecayProfile& p);

/// Per-mode summary over several rays: mean rate, minimum R².
DecayFit combine_fits(const std::vector<DecayFit>& fits);

/// √((λ−α)(β−λ)) for λ in the open gap.
double ct_shape(double lambda, const GapInterval& gap);

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace gapguide
