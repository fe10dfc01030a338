#include <gtest/gtest.h>

#include <algorithm>

#include "gapguide/krylov.hpp"

using namespace gapguide;

namespace {

BlockMap diagonal(const Eigen::VectorXd& d) {
    return [d](const Eigen::MatrixXcd& x, Eigen::MatrixXcd& y) { y = d.asDiagonal() * x; };
}

}  // namespace

TEST(Krylov, LargestMagnitudeOfDiagonal) {
    const int n = 400;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0 + i;
    KrylovOptions o;
    o.nev = 5;
    o.block = 2;
    o.tol = 1e-12;
    const KrylovResult r = krylov_schur(diagonal(d), n, o);
    ASSERT_TRUE(r.converged);
    std::vector<double> th(r.theta.data(), r.theta.data() + r.theta.size());
    std::sort(th.rbegin(), th.rend());
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(th[static_cast<std::size_t>(i)], n - i, 1e-8 * n);
    EXPECT_LT((r.vectors.adjoint() * r.vectors - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-10);
    EXPECT_LT(r.residuals.maxCoeff(), 1e-8 * n);
}

TEST(Krylov, SmallestAlgebraicWithDegeneracy) {
    const int n = 300;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0 + 0.05 * i;
    d[0] = d[1] = d[2] = -2.0;  // triple eigenvalue
    KrylovOptions o;
    o.nev = 4;
    o.block = 4;
    o.which = KrylovOptions::Which::SmallestAlgebraic;
    o.tol = 1e-10;
    o.max_restarts = 2000;
    const KrylovResult r = krylov_schur(diagonal(d), n, o);
    ASSERT_TRUE(r.converged);
    std::vector<double> th(r.theta.data(), r.theta.data() + r.theta.size());
    std::sort(th.begin(), th.end());
    EXPECT_NEAR(th[0], -2.0, 1e-8);
    EXPECT_NEAR(th[1], -2.0, 1e-8);
    EXPECT_NEAR(th[2], -2.0, 1e-8);
    EXPECT_NEAR(th[3], 1.15, 1e-8);
}

TEST(Krylov, ReportsStagnationWithoutThrowing) {
    const int n = 500;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d[i] = 1.0 + 1e-9 * i;
    KrylovOptions o;
    o.nev = 3;
    o.block = 1;
    o.max_restarts = 1;
    o.tol = 1e-15;
    o.which = KrylovOptions::Which::SmallestAlgebraic;
    const KrylovResult r = krylov_schur(diagonal(d), n, o);
    EXPECT_LE(r.restarts, 1);
    EXPECT_EQ(r.theta.size(), 3);
}
