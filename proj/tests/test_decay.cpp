#include <gtest/gtest.h>

#include <cmath>

#include "gapguide/decay.hpp"
#include "gapguide/errors.hpp"
#include "gapguide/pipeline.hpp"

using namespace gapguide;

namespace {

SampledEpsilon homogeneous_strip(double l) {
    MediumSpec m;
    m.dim = 2;
    m.period = {0.5, 1.0, 1.0};
    m.background = 1.0;
    StripSpec s;
    s.l = l;
    s.eps_inside = 4.0;
    m.defect = s;
    SupercellSpec sc;
    sc.resolution = 16.0;
    sc.transverse_periods = 16;
    return build_supercell(m, sc);
}

ModeResult exponential_mode(const SampledEpsilon& eps, double c, bool symmetric) {
    ModeResult mode;
    mode.lambda = 2.0;
    mode.field.resize(static_cast<Eigen::Index>(eps.grid.cells()));
    for (int i = 0; i < eps.grid.n[0]; ++i)
        for (int j = 0; j < eps.grid.n[1]; ++j) {
            const double y = eps.grid.center(1, j);
            const double amp = symmetric || y > 0.0 ? 1.0 : 3.0;
            mode.field[static_cast<Eigen::Index>(eps.grid.index(i, j))] = amp * std::exp(-c * std::abs(y));
        }
    return mode;
}

}  // namespace

TEST(Decay, RecoversExponentialRate) {
    const SampledEpsilon eps = homogeneous_strip(0.5);
    const ModeResult mode = exponential_mode(eps, 1.3, false);
    const GapInterval gap{1.0, 3.0};
    const ModeDecay md = analyze_decay(mode, eps, scalar_layout(eps), gap);
    ASSERT_EQ(md.fits.size(), 2u);
    for (const DecayFit& f : md.fits) {
        EXPECT_NEAR(f.rate, 1.3, 1e-9);
        EXPECT_NEAR(f.r2, 1.0, 1e-12);
        EXPECT_GE(f.used, 5);
        EXPECT_NEAR(f.d_min, 0.5, 1e-12);
    }
    EXPECT_NEAR(md.fit.rate, 1.3, 1e-9);
    EXPECT_NEAR(md.ct, 1.0, 1e-14);
    const DecayProfile& p = md.profiles.front();
    EXPECT_TRUE(p.truncated);
    EXPECT_LE(md.fits.front().d_max, p.guard + 1e-12);
}

TEST(Decay, ConstantFieldHasZeroRate) {
    const SampledEpsilon eps = homogeneous_strip(1.0);
    const ModeResult mode = exponential_mode(eps, 0.0, true);
    const DecayFit f = fit_decay(profile(mode, scalar_layout(eps), eps.grid, *eps.strip, {1.0, 0.0}));
    EXPECT_NEAR(f.rate, 0.0, 1e-12);
}

TEST(Decay, GrowingFieldClampsRate) {
    const SampledEpsilon eps = homogeneous_strip(0.5);
    const ModeResult mode = exponential_mode(eps, -0.5, true);
    const DecayFit f = fit_decay(profile(mode, scalar_layout(eps), eps.grid, *eps.strip, {1.0, 0.0}));
    EXPECT_GT(f.slope, 0.0);
    EXPECT_EQ(f.rate, 0.0);
}

TEST(Decay, TooFewSamplesIsAnError) {
    DecayProfile p;
    for (int i = 0; i < 4; ++i) p.samples.push_back({0.5 + i, std::exp(-1.0 * i), true});
    EXPECT_THROW(fit_decay(p), ValidationError);
    p.samples.push_back({5.0, 0.0, true});
    EXPECT_THROW(fit_decay(p), ValidationError);
}

TEST(Decay, FieldLayoutMismatch) {
    const SampledEpsilon eps = homogeneous_strip(0.5);
    ModeResult mode;
    mode.field = Eigen::VectorXcd::Ones(10);
    EXPECT_THROW(profile(mode, scalar_layout(eps), eps.grid, *eps.strip, {1.0, 0.0}), ValidationError);
}

TEST(Decay, CtShape) {
    const GapInterval gap{1.0, 5.0};
    EXPECT_DOUBLE_EQ(ct_shape(3.0, gap), 2.0);
    EXPECT_DOUBLE_EQ(ct_shape(1.0, gap), 0.0);
    EXPECT_THROW(ct_shape(0.5, gap), DomainError);
    EXPECT_THROW(ct_shape(5.5, gap), DomainError);
}

TEST(Decay, Spearman) {
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 400}), 1.0);
    EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
    EXPECT_NEAR(spearman({1, 2, 2, 3}, {1, 2, 3, 4}), 0.9486832980505138, 1e-12);
    EXPECT_THROW(spearman({1}, {1}), ValidationError);
    EXPECT_THROW(spearman({1, 2}, {1, 2, 3}), ValidationError);
}

TEST(Decay, CombineFits) {
    DecayFit a, b;
    a.rate = 1.0;
    a.r2 = 0.99;
    b.rate = 3.0;
    b.r2 = 0.9;
    const DecayFit c = combine_fits({a, b});
    EXPECT_DOUBLE_EQ(c.rate, 2.0);
    EXPECT_DOUBLE_EQ(c.r2, 0.9);
    EXPECT_THROW(combine_fits({}), ValidationError);
}
