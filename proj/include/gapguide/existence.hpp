#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "gapguide/gap.hpp"
#include "gapguide/xsection.hpp"

namespace gapguide {

/// Unit-norm profile ψ(t) = c·S(1 − t²) on [−1, 1] (S the quintic smoothstep),
/// with closed-form derivatives and Gauss–Legendre moments.
class Bump {
public:
    Bump();
    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double d1(double t) const;
    [[nodiscard]] double d2(double t) const;
    /// ψ_n(x) = n^{-1/2} ψ(x/n) and its derivatives.
    [[nodiscard]] double value_n(double x, double n) const { return value(x / n) / std::sqrt(n); }
    [[nodiscard]] double d2_n(double x, double n) const { return d2(x / n) / (n * n * std::sqrt(n)); }

    [[nodiscard]] double norm2() const { return norm2_; }        // ‖ψ‖² (= 1)
    [[nodiscard]] double d1_norm2() const { return d1_norm2_; }  // ‖ψ′‖²
    [[nodiscard]] double d2_norm2() const { return d2_norm2_; }  // ‖ψ″‖²
    [[nodiscard]] double d2_inner() const { return d2_inner_; }  // ⟨ψ″, ψ⟩

private:
    double c_ = 1.0;
    double norm2_ = 0.0, d1_norm2_ = 0.0, d2_norm2_ = 0.0, d2_inner_ = 0.0;
};

/// Gauss–Legendre nodes and weights on [−1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Parameters of the trial field w = ψ_n(x₁) e^{ikx₁} (0, g_l), g_l(x′) = g(x′/l)/l.
struct TrialParams {
    double l = 1.0;
    double eps = 1.0;
    double mu = 0.0;
    double delta = 0.0;
    double n = 1.0;
    std::shared_ptr<const TestField> g;
    Bump psi;

    [[nodiscard]] double k() const { return std::sqrt(mu * eps); }
    /// Validates the invariants; with a gap, also (μ−δ, μ+δ) ⊆ G.
    void validate(const std::optional<GapInterval>& gap = std::nullopt) const;
};

struct ResidualReport {
    double closed_form = 0.0;
    double quadrature = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 4> terms{};  // n⁻⁴‖ψ″‖², 4k²n⁻²‖ψ′‖², l⁻⁴‖Δg‖², 2(nl)⁻²⟨ψ″,ψ⟩⟨Δg,g⟩
    double threshold = 0.0;         // δ²ε²
    bool passes = false;
    double psi_identity = 0.0;      // |⟨ψ″,ψ⟩ + ‖ψ′‖²| / ‖ψ′‖²
    double g_identity = 0.0;        // |⟨Δg,g⟩ + ‖∇g‖²| / ‖∇g‖²
};

struct ConditionResult {
    bool satisfied = false;  // l²(β−α)ε > 2ν
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;     // lhs − rhs
    double delta_star = 0.0; // ν/(l²ε): δ-net half-width
};

/// Sufficient condition for in-gap spectrum (theorem form).
ConditionResult check_condition(double l, double eps, const GapInterval& gap, double nu);

struct DeltaCondition {
    bool satisfied = false;  // l²δε > ν
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
};

/// δ-form of the condition: spectrum within δ of every gap point when l²δε > ν.
DeltaCondition check_delta_condition(double l, double eps, double delta, double nu);

/// Four-term expansion of ‖∇×∇×w − k²w‖².
ResidualReport residual_closed_form(const TrialParams& tp);

/// Direct evaluation: assembles w slice by slice (x₁ midpoint cells across
/// supp ψ_n, `slices` of them), applies a sixth-order axial and staggered
/// transverse double curl, and sums |∇×∇×w − k²w|².
double residual_quadrature(const TrialParams& tp, int slices);

/// ‖w‖² by the same quadrature.
double trial_norm2(const TrialParams& tp, int slices);

struct MinimalN {
    bool reachable = false;
    long n = 0;
    double floor = 0.0;      // l⁻⁴‖Δg‖²
    double threshold = 0.0;  // δ²ε²
    double residual = 0.0;   // closed form at n
};

/// Smallest integer n ≥ 1 with closed form < δ²ε², or unreachable iff the floor ≥ δ²ε².
MinimalN minimal_n(TrialParams tp);

}  // namespace gapguide
