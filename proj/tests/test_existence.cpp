#include <cmath>
#include <memory>
#include <random>

#include <gtest/gtest.h>

#include "gapguide/errors.hpp"
#include "gapguide/existence.hpp"

using namespace gapguide;

namespace {

std::shared_ptr<const TestField> disk_field(double rho = 0.4) {
    static const auto f = std::make_shared<const TestField>(make_test_field(CrossSection::disk({0.0, 0.0}, 1.0), 0.4, 2.0 / 64));
    if (rho == 0.4) return f;
    return std::make_shared<const TestField>(make_test_field(CrossSection::disk({0.0, 0.0}, 1.0), rho, 2.0 / 64));
}

TrialParams params(double l, double eps, double mu, double delta, double n) {
    TrialParams tp;
    tp.l = l;
    tp.eps = eps;
    tp.mu = mu;
    tp.delta = delta;
    tp.n = n;
    tp.g = disk_field();
    return tp;
}

}  // namespace

TEST(Condition, WorkedExample) {
    const ConditionResult c = check_condition(1.0, 12.0, {1.0, 4.0}, 14.6820);
    EXPECT_TRUE(c.satisfied);
    EXPECT_NEAR(c.margin, 6.636, 1e-9);
    EXPECT_NEAR(c.delta_star, 14.6820 / 12.0, 1e-12);
}

TEST(Condition, BoundaryIsStrict) {
    // l²(β−α)ε = 2ν exactly → not satisfied.
    EXPECT_FALSE(check_condition(1.0, 2.0, {1.0, 2.0}, 1.0).satisfied);
    EXPECT_THROW((void)check_condition(1.0, 2.0, {2.0, 1.0}, 1.0), ValidationError);
    EXPECT_THROW((void)check_condition(-1.0, 2.0, {1.0, 2.0}, 1.0), ValidationError);
}

TEST(Condition, MonotoneInEpsilon) {
    bool seen = false;
    for (double eps = 0.5; eps < 40.0; eps += 0.5) {
        const bool s = check_condition(0.7, eps, {1.0, 3.0}, 5.0).satisfied;
        if (seen) EXPECT_TRUE(s);
        seen = seen || s;
    }
    EXPECT_TRUE(seen);
}

TEST(Condition, DeltaForm) {
    EXPECT_TRUE(check_delta_condition(2.0, 3.0, 1.0, 11.0).satisfied);
    EXPECT_FALSE(check_delta_condition(2.0, 3.0, 1.0, 12.0).satisfied);
}

TEST(Bump, UnitNormAndIntegrationByParts) {
    const Bump b;
    EXPECT_NEAR(b.norm2(), 1.0, 1e-14);
    EXPECT_NEAR(b.d2_inner(), -b.d1_norm2(), 1e-12 * b.d1_norm2());
    EXPECT_DOUBLE_EQ(b.value(1.0), 0.0);
    EXPECT_DOUBLE_EQ(b.value(-1.5), 0.0);
}

TEST(Bump, GaussLegendreIntegratesPolynomials) {
    std::vector<double> x, w;
    gauss_legendre(10, x, w);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], 18);
    EXPECT_NEAR(s, 2.0 / 19.0, 1e-14);
}

TEST(Residual, ClosedFormMatchesQuadrature) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 3; ++t) {
        const TrialParams tp = params(0.5 + 1.5 * u(rng), 1.0 + 12.0 * u(rng), 1.0 + 5.0 * u(rng), 0.5, 1.0 + 4.0 * u(rng));
        const ResidualReport r = residual_closed_form(tp);
        const double q = residual_quadrature(tp, 1000);
        EXPECT_NEAR(q, r.closed_form, 1e-6 * r.closed_form);
        EXPECT_LT(r.psi_identity, 1e-8);
        EXPECT_LT(r.g_identity, 1e-8);
        EXPECT_NEAR(trial_norm2(tp, 1000), 1.0, 1e-8);
    }
}

TEST(Residual, LargeNApproachesFloor) {
    TrialParams tp = params(2.0, 12.0, 4.0, 3.0, 1.0);
    const double floor = tp.g->lap_norm2 / std::pow(tp.l, 4);
    tp.n = 1e6;
    EXPECT_NEAR(residual_closed_form(tp).closed_form, floor, 1e-6 * floor);
}

TEST(MinimalN, ReachableWhenFloorBelowThreshold) {
    const TrialParams tp = params(2.0, 12.0, 4.0, 3.0, 1.0);
    const MinimalN m = minimal_n(tp);
    ASSERT_TRUE(m.reachable);
    EXPECT_LT(m.residual, m.threshold);
    TrialParams prev = tp;
    if (m.n > 1) {
        prev.n = static_cast<double>(m.n - 1);
        EXPECT_GE(residual_closed_form(prev).closed_form, m.threshold);
    }
}

TEST(MinimalN, UnreachableWhenFloorAboveThreshold) {
    const TrialParams tp = params(0.5, 1.0, 4.0, 0.1, 1.0);
    const MinimalN m = minimal_n(tp);
    EXPECT_FALSE(m.reachable);
    EXPECT_GE(m.floor, m.threshold);
}

TEST(TrialParams, ValidationAgainstGap) {
    const TrialParams tp = params(2.0, 12.0, 4.0, 3.0, 1.0);
    EXPECT_NO_THROW(tp.validate());
    EXPECT_THROW(tp.validate(GapInterval{3.0, 5.0}), ValidationError);
    TrialParams bad = tp;
    bad.n = 0.0;
    EXPECT_THROW(bad.validate(), ValidationError);
}
