#include "gapguide/pipeline.hpp"

#include <cmath>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

int cells_for(double extent, double resolution) {
    const double c = extent * resolution;
    const int n = static_cast<int>(std::lround(c));
    if (n < 1 || std::abs(c - n) > 1e-9 * std::max(1.0, c))
        throw ValidationError("extent " + std::to_string(extent) + " is not a whole number of cells");
    return n;
}

}  // namespace

GridSpec supercell_grid(const MediumSpec& bulk, const SupercellSpec& sc) {
    if (!(sc.resolution > 0.0) || sc.axial_periods < 1 || sc.transverse_periods < 1)
        throw ValidationError("supercell needs positive resolution and period counts");
    if (bulk.dim < 2) throw ValidationError("supercells need a 2D or 3D medium");
    GridSpec g;
    g.dim = bulk.dim;
    for (int a = 0; a < bulk.dim; ++a) {
        const double extent = bulk.period[a] * (a == 0 ? sc.axial_periods : sc.transverse_periods);
        g.n[a] = cells_for(extent, sc.resolution);
        g.h[a] = extent / g.n[a];
        g.origin[a] = a == 0 ? 0.0 : -0.5 * extent;
    }
    return g;
}

SampledEpsilon build_supercell(const MediumSpec& spec, const SupercellSpec& sc) {
    MediumSpec bulk = spec;
    bulk.defect.reset();
    SampledEpsilon eps = build_medium(bulk, supercell_grid(bulk, sc));
    if (spec.defect) eps = with_defect(eps, *spec.defect);
    return eps;
}

SampledEpsilon build_unit_cell(const MediumSpec& spec, double resolution) {
    MediumSpec bulk = spec;
    bulk.defect.reset();
    GridSpec g;
    g.dim = bulk.dim;
    for (int a = 0; a < bulk.dim; ++a) {
        g.n[a] = cells_for(bulk.period[a], resolution);
        g.h[a] = bulk.period[a] / g.n[a];
        g.origin[a] = 0.0;
    }
    return build_medium(bulk, g);
}

BulkGaps bulk_gaps(const MediumSpec& spec, double resolution, int per_segment, int bands, double min_width,
                   const InteriorOptions& opt) {
    const SampledEpsilon cell = build_unit_cell(spec, resolution);
    BulkGaps out;
    out.bands = band_structure(cell, irreducible_path(spec.period, spec.dim, per_segment), bands, opt);
    out.gaps = find_gaps(out.bands, min_width);
    return out;
}

NuEstimate cross_section_nu(const CrossSection& cs, int cells) {
    if (cells < 32) throw ValidationError("need at least 32 cells across the cross-section");
    std::vector<std::pair<double, double>> seq;
    double quotient = 0.0;
    for (int f = 1; f <= 4; f *= 2) {
        const double h = cs.diameter() / (cells * f);
        const NuEstimate e = cs.dim() == 1 ? solve_nu_scalar(cs, h) : solve_nu_vector(cs, h);
        seq.emplace_back(h, e.value);
        quotient = e.achieved_quotient;
    }
    NuEstimate ex = refine_extrapolate(seq);
    ex.achieved_quotient = quotient;
    return ex;
}

ModeDecay analyze_decay(const ModeResult& mode, const SampledEpsilon& eps, const FieldLayout& layout,
                        const GapInterval& gap, const ProfileOptions& opt) {
    if (!eps.strip) throw ValidationError("decay analysis needs a medium with a strip");
    ModeDecay md;
    std::vector<Vec2> rays{{1.0, 0.0}, {-1.0, 0.0}};
    if (eps.grid.dim == 3) {
        rays.push_back({0.0, 1.0});
        rays.push_back({0.0, -1.0});
    }
    for (const Vec2& r : rays) {
        md.profiles.push_back(profile(mode, layout, eps.grid, *eps.strip, r, opt));
        md.fits.push_back(fit_decay(md.profiles.back()));
    }
    md.fit = combine_fits(md.fits);
    md.ct = gap.contains(mode.lambda) ? ct_shape(mode.lambda, gap) : 0.0;
    return md;
}

}  // namespace gapguide
