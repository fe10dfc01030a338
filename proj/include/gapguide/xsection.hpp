#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gapguide/cross_section.hpp"
#include "gapguide/grid.hpp"

namespace gapguide {

/// Estimate of ν (or of its scalar analog) for one cross-section.
struct NuEstimate {
    double value = 0.0;              // 1/length²
    double grid_h = 0.0;
    bool extrapolated = false;
    double achieved_quotient = 0.0;  // ‖Δg‖/‖g‖ of g = rot ∇ψ from the discrete minimizer
    double order = 0.0;              // observed convergence order (extrapolated estimates)
    long unknowns = 0;
    int iterations = 0;
    double residual = 0.0;           // ‖Aψ − νBψ‖ / ‖Aψ‖
    std::string warning;             // non-empty when an estimate is flagged
};

/// Nodes of the lattice origin + (i, j)·h that are solver unknowns
/// (boundary distance > h/2). `id` maps the full rectangle to unknowns (−1 outside).
struct NodeGrid {
    double h = 0.0;
    Vec2 origin{0.0, 0.0};  // position of node (0, 0)
    int nx = 0, ny = 0;     // rectangle size
    std::vector<int> id;    // nx·ny, row-major in i (x) then j (y)
    std::vector<std::pair<int, int>> nodes;

    [[nodiscard]] int at(int i, int j) const {
        return (i < 0 || j < 0 || i >= nx || j >= ny) ? -1 : id[static_cast<std::size_t>(i) * ny + j];
    }
    [[nodiscard]] Vec2 position(int i, int j) const { return {origin[0] + i * h, origin[1] + j * h}; }
};

/// Discrete clamped buckling minimizer: ψ at the unknown nodes (max |ψ| = 1, ψ ≥ 0 at the peak).
struct NuSolution {
    NuEstimate estimate;
    NodeGrid grid;
    Eigen::VectorXd stream;
    /// Spread of −Δψ − νψ over nodes at least 3h from ∂Ω, relative to max |νψ|.
    double euler_lagrange_spread = 0.0;
};

struct NuOptions {
    double tol = 1e-12;     // relative change of ν between inverse iterations
    int max_iter = 2000;
    bool dense = false;     // dense generalized eigen-solve (≤ 10⁴ unknowns)
};

/// Smallest clamped buckling eigenvalue Δ²ψ = ν(−Δψ), ψ = ∂ψ/∂n = 0 on ∂Ω.
NuSolution solve_nu_vector_full(const CrossSection& cs, double h, const NuOptions& opt = {});
NuEstimate solve_nu_vector(const CrossSection& cs, double h, double tol = 1e-12);

/// Smallest Dirichlet eigenvalue of −Δ on Ω (interval or planar section).
NuEstimate solve_nu_scalar(const CrossSection& cs, double h, double tol = 1e-12);

/// Richardson extrapolation (order 2) of ≥ 3 estimates at geometrically decreasing h.
/// A non-monotone sequence yields the finest value with a warning.
NuEstimate refine_extrapolate(const std::vector<std::pair<double, double>>& estimates);

/// Divergence-free test field g = (∂_y f, −∂_x f), f = η_ρ·ψ, on staggered positions:
/// g_x at (x_i, y_j + h/2), g_y at (x_i + h/2, y_j). Normalized to ‖g‖ = 1.
struct TestField {
    double h = 0.0;
    double rho = 0.0;
    SampleLattice node_lattice;  // stream samples f
    SampleLattice gx_lattice;
    SampleLattice gy_lattice;
    Eigen::VectorXd stream;
    Eigen::VectorXd gx, gy;
    double quotient = 0.0;        // ‖Δg‖/‖g‖
    double lap_norm2 = 0.0;       // ‖Δg‖²
    double lap_inner = 0.0;       // ⟨Δg, g⟩
    double grad_norm2 = 0.0;      // ‖∇g‖²
    double max_divergence = 0.0;  // max |div g| · h / max |g|
    double support_margin = 0.0;  // min boundary distance over the support of f
};

/// Builds the cutoff test field from a buckling solution. ρ = 0 disables the cutoff.
TestField make_test_field(const NuSolution& sol, const CrossSection& cs, double rho);
TestField make_test_field(const CrossSection& cs, double rho, double h);

/// Quintic smoothstep S(t) = 6t⁵ − 15t⁴ + 10t³ on [0, 1], clamped outside.
[[nodiscard]] double smoothstep5(double t);

}  // namespace gapguide
