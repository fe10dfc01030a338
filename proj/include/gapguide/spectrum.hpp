#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gapguide/discrete_op.hpp"
#include "gapguide/gap.hpp"

namespace gapguide {

/// Eigenpair with its true residual ‖Au − λu‖/‖u‖.
struct ModeResult {
    double lambda = 0.0;
    Eigen::VectorXcd field;
    double residual = 0.0;
    double k1 = 0.0;
    double divergence = 0.0;  // ‖Gᴴu‖/(‖G‖‖u‖) for Maxwell modes, 0 otherwise
};

struct InteriorOptions {
    enum class Method { ShiftInvert, Folded };
    Method method = Method::ShiftInvert;
    int count = 12;        // eigenpairs computed per spectral slice
    int block = 4;         // ≥ expected multiplicity
    double tol = 1e-10;    // Krylov tolerance
    int max_depth = 10;    // slice bisection depth
    int max_restarts = 400;
    std::uint64_t seed = 7;
};

struct InteriorStats {
    int slices = 0;
    long applications = 0;
    bool complete = true;  // false if a slice hit max_depth
};

/// All eigenpairs of a Hermitian operator with λ in [lo, hi]. The window is
/// bisected until each slice's `count` nearest eigenvalues reach beyond it.
std::vector<ModeResult> interior_eigs(const HermitianOperator& op, double lo, double hi, const InteriorOptions& opt,
                                      InteriorStats* stats = nullptr);

/// The `count` smallest eigenpairs (shift-invert below the spectrum).
std::vector<ModeResult> lowest_eigs(const HermitianOperator& op, int count, const InteriorOptions& opt);

struct BandTable {
    std::vector<Vec3> k;                      // Bloch wave vectors
    std::vector<std::vector<double>> bands;   // ascending per k
    std::vector<std::vector<double>> residuals;
    GridSpec grid;
};

/// Lowest `bands` nonzero eigenvalues of the periodic (defect-free) medium at
/// each Bloch vector. 2D media use the scalar operator, 3D media Maxwell with
/// the gradient null space lifted and filtered.
BandTable band_structure(const SampledEpsilon& medium, const std::vector<Vec3>& k_path, int bands,
                         const InteriorOptions& opt = {});

/// Uniform samples of the irreducible path Γ→X→M→Γ (2D) for a cell with periods (a₁, a₂).
std::vector<Vec3> irreducible_path(Vec3 period, int dim, int per_segment);

struct GapList {
    std::vector<GapInterval> gaps;
    int k_samples = 0;
    std::string caveat;
};

/// Maximal intervals (α, β), α > 0, free of all sampled bands, width ≥ min_width.
GapList find_gaps(const BandTable& bt, double min_width);

struct MuCheck {
    double mu = 0.0;
    double nearest = 0.0;  // distance to the nearest computed eigenvalue
    bool covered = false;  // nearest < δ
};

struct DefectSpectrum {
    std::vector<ModeResult> modes;  // sorted by (k1, λ)
    std::vector<MuCheck> mu;
    bool all_covered = false;
    InteriorStats stats;
};

/// Transverse truncation of the supercell.
enum class Transverse { Periodic, Wall };

/// Union over k₁ samples of the eigenpairs inside the gap, plus the δ-net
/// check at the given μ points.
DefectSpectrum defect_spectrum(const SampledEpsilon& medium, const GapInterval& gap, const std::vector<double>& k1_samples,
                               double delta, const std::vector<double>& mu_points, Transverse transverse,
                               const InteriorOptions& opt = {});

/// `count` points strictly inside the gap: α + i(β−α)/(count+1).
std::vector<double> uniform_mu(const GapInterval& gap, int count);

/// `count` uniform k₁ samples in [0, π/a].
std::vector<double> uniform_k1(double period, int count);

}  // namespace gapguide
