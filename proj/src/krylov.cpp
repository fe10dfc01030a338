#include "gapguide/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "gapguide/errors.hpp"

namespace gapguide {

namespace {

Eigen::VectorXcd gaussian(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = nd(rng);
        const double im = nd(rng);
        v[i] = {re, im};
    }
    return v;
}

// Orthonormalizes the columns of W against V[:, :j] and each other (two-pass
// Gram–Schmidt). Columns that collapse are replaced by random directions.
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& V, Eigen::Index j, Eigen::MatrixXcd W, std::mt19937_64& rng) {
    const Eigen::Index n = W.rows();
    for (Eigen::Index c = 0; c < W.cols(); ++c) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            Eigen::VectorXcd w = W.col(c);
            const double before = w.norm();
            for (int pass = 0; pass < 2; ++pass) {
                if (j > 0) w -= V.leftCols(j) * (V.leftCols(j).adjoint() * w);
                if (c > 0) w -= W.leftCols(c) * (W.leftCols(c).adjoint() * w);
            }
            const double after = w.norm();
            if (before > 0.0 && after > 1e-10 * before) {
                W.col(c) = w / after;
                break;
            }
            W.col(c) = gaussian(n, rng);
            if (attempt == 7) throw IterationError("cannot extend Krylov basis", after);
        }
    }
    return W;
}

}  // namespace

KrylovResult krylov_schur(const BlockMap& T, Eigen::Index n, const KrylovOptions& opt) {
    if (n <= 0) throw ValidationError("empty operator");
    const Eigen::Index nev = std::min<Eigen::Index>(std::max(opt.nev, 1), n);
    const Eigen::Index bs = std::clamp<Eigen::Index>(opt.block, 1, n);
    Eigen::Index m = opt.max_basis > 0 ? opt.max_basis : std::max(2 * nev + 2 * bs, nev + 6 * bs);
    m = std::min(m, n);
    if (m < std::min(n, nev + bs)) m = std::min(n, nev + bs);

    std::mt19937_64 rng(opt.seed);
    Eigen::MatrixXcd V(n, m), TV(n, m);
    // Columns [0, frontier) have their images inside span(V); [frontier, j) are pending.
    Eigen::Index j = 0, jt = 0, frontier = 0;
    {
        Eigen::MatrixXcd W(n, std::min(bs, m));
        for (Eigen::Index c = 0; c < W.cols(); ++c) W.col(c) = gaussian(n, rng);
        W = orthonormalize(V, 0, W, rng);
        V.leftCols(W.cols()) = W;
        j = W.cols();
    }

    KrylovResult res;
    Eigen::MatrixXcd Y;
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        // Expand the basis to m columns.
        while (true) {
            if (jt < j) {
                T(V.middleCols(jt, j - jt), Y);
                TV.middleCols(jt, j - jt) = Y;
                res.applications += j - jt;
                jt = j;
            }
            if (j >= m) break;
            const Eigen::Index nb = std::min(j - frontier, m - j);
            Eigen::MatrixXcd W = orthonormalize(V, j, TV.middleCols(frontier, nb), rng);
            V.middleCols(j, nb) = W;
            frontier += nb;
            j += nb;
        }

        // Rayleigh–Ritz on the full basis.
        Eigen::MatrixXcd H = V.leftCols(j).adjoint() * TV.leftCols(j);
        H = 0.5 * (H + H.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        const Eigen::VectorXd& ev = es.eigenvalues();
        std::vector<Eigen::Index> order(static_cast<std::size_t>(j));
        std::iota(order.begin(), order.end(), 0);
        switch (opt.which) {
            case KrylovOptions::Which::LargestMagnitude:
                std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return std::abs(ev[a]) > std::abs(ev[b]); });
                break;
            case KrylovOptions::Which::SmallestAlgebraic:
                std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ev[a] < ev[b]; });
                break;
            case KrylovOptions::Which::LargestAlgebraic:
                std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return ev[a] > ev[b]; });
                break;
        }
        const double scale = std::max(std::abs(ev[0]), std::abs(ev[j - 1]));
        const Eigen::Index pending = j - frontier;
        const Eigen::Index keep = std::clamp<Eigen::Index>((nev + m) / 2, nev, std::max<Eigen::Index>(nev, m - pending));
        const Eigen::Index kk = std::min(keep, j);
        Eigen::MatrixXcd Ysel(j, kk);
        Eigen::VectorXd theta(kk);
        for (Eigen::Index c = 0; c < kk; ++c) {
            Ysel.col(c) = es.eigenvectors().col(order[static_cast<std::size_t>(c)]);
            theta[c] = ev[order[static_cast<std::size_t>(c)]];
        }
        Eigen::MatrixXcd X = V.leftCols(j) * Ysel;
        Eigen::MatrixXcd TX = TV.leftCols(j) * Ysel;
        Eigen::VectorXd rn(kk);
        for (Eigen::Index c = 0; c < kk; ++c) rn[c] = (TX.col(c) - theta[c] * X.col(c)).norm();

        bool done = true;
        for (Eigen::Index c = 0; c < nev; ++c) {
            const double ref = opt.which == KrylovOptions::Which::LargestMagnitude ? std::abs(theta[c]) : scale;
            if (!(rn[c] <= opt.tol * std::max(ref, 1e-300))) done = false;
        }
        res.restarts = restart;
        res.theta = theta.head(nev);
        res.vectors = X.leftCols(nev);
        res.residuals = rn.head(nev);
        if (done || j >= n) {
            res.converged = true;
            return res;
        }
        if (restart == opt.max_restarts) break;

        // Thick restart: kept Ritz vectors plus the pending images, which
        // span the Ritz residuals.
        const Eigen::MatrixXcd P = orthonormalize(V, j, TV.middleCols(frontier, pending), rng);
        V.leftCols(kk) = X;
        TV.leftCols(kk) = TX;
        const Eigen::Index nb = std::min<Eigen::Index>(pending, m - kk);
        V.middleCols(kk, nb) = orthonormalize(V, kk, P.leftCols(nb), rng);
        jt = kk;
        frontier = kk;
        j = kk + nb;
    }
    res.converged = false;
    return res;
}

}  // namespace gapguide
