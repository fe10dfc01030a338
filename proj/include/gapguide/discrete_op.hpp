#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gapguide/kernels.hpp"
#include "gapguide/media.hpp"

namespace gapguide {

using SparseC = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;

/// Per-axis truncation: Bloch-periodic with quasimomentum k (phase e^{ikL}
/// across the cell of length L) or a wall (Dirichlet / perfect conductor).
struct AxisBC {
    enum class Kind { Bloch, Wall };
    Kind kind = Kind::Bloch;
    double k = 0.0;

    static AxisBC bloch(double k) { return {Kind::Bloch, k}; }
    static AxisBC wall() { return {Kind::Wall, 0.0}; }
    [[nodiscard]] bool is_wall() const { return kind == Kind::Wall; }
};

enum class Exec { Serial, Parallel };

/// Hermitian operator on ℂⁿ, applied matrix-free and assemblable.
class HermitianOperator {
public:
    virtual ~HermitianOperator() = default;
    [[nodiscard]] virtual Eigen::Index size() const = 0;
    virtual void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const = 0;
    [[nodiscard]] virtual SparseC matrix() const = 0;
};

/// Wraps an assembled sparse Hermitian matrix.
class SparseOperator final : public HermitianOperator {
public:
    explicit SparseOperator(SparseC m) : m_(std::move(m)) {}
    [[nodiscard]] Eigen::Index size() const override { return m_.rows(); }
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override { y = m_ * x; }
    [[nodiscard]] SparseC matrix() const override { return m_; }

private:
    SparseC m_;
};

struct ScalarField2 {
    GridSpec grid;
    Eigen::VectorXcd values;
    double bloch_k1 = 0.0;
};

/// −∇·(1/ε)∇ on a 2D cell grid, five-point flux form with face coefficient 2/(ε₁+ε₂).
class ScalarOperator final : public HermitianOperator {
public:
    ScalarOperator(const SampledEpsilon& eps, std::array<AxisBC, 2> bc, Exec exec = Exec::Parallel);

    [[nodiscard]] Eigen::Index size() const override { return static_cast<Eigen::Index>(grid_.cells()); }
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
    [[nodiscard]] SparseC matrix() const override;

    /// Operator application on a field (validates the shape).
    [[nodiscard]] ScalarField2 apply(const ScalarField2& u) const;

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] const std::array<AxisBC, 2>& bc() const { return bc_; }
    [[nodiscard]] const kernels::ScalarStencil& stencil() const { return st_; }
    void set_exec(Exec e) { exec_ = e; }

private:
    GridSpec grid_;
    std::array<AxisBC, 2> bc_;
    kernels::ScalarStencil st_;
    Exec exec_;
};

struct YeeField3 {
    GridSpec grid;
    std::array<AxisBC, 3> bc;
    Eigen::VectorXcd values;  // E₀ | E₁ | E₂ concatenated
};

/// M = ∇×(1/ε)∇× on a Yee grid (E on edges, 1/ε on faces). An optional
/// penalty s·G Gᴴ lifts the gradient null space without changing the
/// eigenpairs orthogonal to it.
class MaxwellOperator final : public HermitianOperator {
public:
    MaxwellOperator(const SampledEpsilon& eps, std::array<AxisBC, 3> bc, Exec exec = Exec::Parallel);

    [[nodiscard]] Eigen::Index size() const override { return st_.e_size; }
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
    [[nodiscard]] SparseC matrix() const override;

    [[nodiscard]] YeeField3 apply(const YeeField3& u) const;

    /// Discrete curl E → H (faces) and its adjoint.
    [[nodiscard]] Eigen::VectorXcd curl(const Eigen::VectorXcd& e) const;
    [[nodiscard]] Eigen::VectorXcd curl_adjoint(const Eigen::VectorXcd& hf) const;
    /// Discrete gradient nodes → edges (wall nodes held at zero).
    [[nodiscard]] const SparseC& gradient() const { return grad_; }
    [[nodiscard]] Eigen::Index node_count() const { return grad_.cols(); }
    [[nodiscard]] SparseC curl_matrix() const;

    void set_penalty(double s) { penalty_ = s; }
    [[nodiscard]] double penalty() const { return penalty_; }
    void set_exec(Exec e) { exec_ = e; }

    [[nodiscard]] const GridSpec& grid() const { return grid_; }
    [[nodiscard]] const std::array<AxisBC, 3>& bc() const { return bc_; }
    [[nodiscard]] const kernels::YeeStencil& stencil() const { return st_; }
    /// Sample lattice of E component c (positions of its edge samples).
    [[nodiscard]] SampleLattice component_lattice(int c) const;
    /// Sample positions of E component c along axis a.
    [[nodiscard]] double edge_position(int c, int a, int i) const;

private:
    GridSpec grid_;
    std::array<AxisBC, 3> bc_;
    kernels::YeeStencil st_;
    SparseC grad_;
    Exec exec_;
    double penalty_ = 0.0;
    mutable Eigen::VectorXcd scratch_;
};

struct IdentityReport {
    double max_symmetry = 0.0;       // max |⟨Au,v⟩ − ⟨u,Av⟩| / (‖A‖ ‖u‖ ‖v‖)
    double min_quadratic = 0.0;      // min ⟨Au,u⟩ / (‖A‖ ‖u‖²)
    double curl_grad = 0.0;          // max ‖C G φ‖ / (‖G φ‖ / h)
    double curl_grad_integer = 0.0;  // same for integer-valued φ (exact arithmetic)
    int trials = 0;
};

/// Randomized checks of Hermitian symmetry, nonnegativity and curl∘grad = 0.
/// Throws StructuralError if any violation exceeds `tol`.
IdentityReport check_identities(const MaxwellOperator& op, int trials, std::uint64_t seed, double tol = 1e-12);
IdentityReport check_identities(const ScalarOperator& op, int trials, std::uint64_t seed, double tol = 1e-12);

/// Discrete symbol q̃_a = (2/h_a) sin(q_a h_a / 2) of the Yee difference along each axis.
[[nodiscard]] Vec3 yee_symbol(const Vec3& h, const Vec3& q);

/// Plane wave p e^{iq·x} sampled on the Yee edges. An eigenvector of M on a
/// homogeneous, fully Bloch grid with eigenvalue |q̃|²/ε when q is compatible
/// with the Bloch phases and p ⊥ q̃.
[[nodiscard]] Eigen::VectorXcd plane_wave(const MaxwellOperator& op, const Vec3& q, const Vec3& pol);

/// Power-iteration estimate of the largest eigenvalue (operator norm).
double norm_estimate(const HermitianOperator& op, int iters = 30, std::uint64_t seed = 11);

/// Seeded standard-normal complex vector.
Eigen::VectorXcd random_vector(Eigen::Index n, std::uint64_t seed);

}  // namespace gapguide
