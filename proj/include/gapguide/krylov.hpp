#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

namespace gapguide {

/// Block application Y = T X of a Hermitian map.
using BlockMap = std::function<void(const Eigen::MatrixXcd& X, Eigen::MatrixXcd& Y)>;

struct KrylovOptions {
    enum class Which { LargestMagnitude, SmallestAlgebraic, LargestAlgebraic };
    int nev = 6;
    int block = 4;
    int max_basis = 0;  // 0 → automatic
    int max_restarts = 400;
    double tol = 1e-12;  // relative Ritz residual
    std::uint64_t seed = 1;
    Which which = Which::LargestMagnitude;
};

struct KrylovResult {
    Eigen::VectorXd theta;        // wanted Ritz values, in selection order
    Eigen::MatrixXcd vectors;     // orthonormal Ritz vectors
    Eigen::VectorXd residuals;    // ‖T x − θ x‖
    int restarts = 0;
    long applications = 0;        // columns pushed through T
    bool converged = false;
};

/// Thick-restart block Krylov–Schur (Hermitian case) with full
/// reorthogonalization. Returns the `nev` wanted Ritz pairs; `converged`
/// is false if the restart budget ran out.
KrylovResult krylov_schur(const BlockMap& T, Eigen::Index n, const KrylovOptions& opt);

}  // namespace gapguide
