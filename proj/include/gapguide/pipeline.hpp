#pragma once

#include <vector>

#include "gapguide/decay.hpp"
#include "gapguide/existence.hpp"
#include "gapguide/media.hpp"
#include "gapguide/spectrum.hpp"
#include "gapguide/xsection.hpp"

namespace gapguide {

/// Finite computational cell: `axial_periods` periods along x₁ (Bloch) and
/// `transverse_periods` periods across, centered on the strip axis.
struct SupercellSpec {
    double resolution = 32.0;  // cells per unit length
    int axial_periods = 1;
    int transverse_periods = 16;
    Transverse transverse = Transverse::Periodic;
};

/// Grid of the supercell (x₁ from 0, transverse axes centered on 0).
GridSpec supercell_grid(const MediumSpec& bulk, const SupercellSpec& sc);
/// Samples the bulk on the supercell and inserts the defect, if any.
SampledEpsilon build_supercell(const MediumSpec& spec, const SupercellSpec& sc);
/// Samples one unit cell of the bulk (defect ignored).
SampledEpsilon build_unit_cell(const MediumSpec& spec, double resolution);

/// Bulk band structure along the irreducible path and its gaps.
struct BulkGaps {
    BandTable bands;
    GapList gaps;
};
BulkGaps bulk_gaps(const MediumSpec& spec, double resolution, int per_segment, int bands, double min_width,
                   const InteriorOptions& opt = {});

/// ν of a cross-section: scalar Dirichlet constant for intervals (2D media),
/// buckling constant for planar sections (3D media); Richardson-extrapolated
/// over `cells`, 2·cells, 4·cells across the diameter.
NuEstimate cross_section_nu(const CrossSection& cs, int cells = 64);

/// Decay analysis of one mode along ±x₂ (and ±x₃ in 3D).
struct ModeDecay {
    std::vector<DecayProfile> profiles;
    std::vector<DecayFit> fits;
    DecayFit fit;      // combined over rays
    double ct = 0.0;   // √((λ−α)(β−λ))
};
ModeDecay analyze_decay(const ModeResult& mode, const SampledEpsilon& eps, const FieldLayout& layout,
                        const GapInterval& gap, const ProfileOptions& opt = {});

}  // namespace gapguide
