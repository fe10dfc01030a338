#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "gapguide/errors.hpp"
#include "gapguide/pipeline.hpp"
#include "gapguide/spectrum.hpp"

using namespace gapguide;

namespace {

MediumSpec layered_stack() {
    MediumSpec m;
    m.dim = 2;
    m.period = {0.25, 1.0, 1.0};
    m.background = 1.0;
    Inclusion layer;
    layer.shape = Inclusion::Shape::Layer;
    layer.axis = 1;
    layer.lo = 0.0;
    layer.hi = 0.5;
    layer.eps = 13.0;
    m.inclusions.push_back(layer);
    return m;
}

MediumSpec square_holes() {
    MediumSpec m;
    m.dim = 2;
    m.background = 13.0;
    Inclusion hole;
    hole.shape = Inclusion::Shape::Box;
    hole.center = {0.5, 0.5, 0.0};
    hole.half = {0.375, 0.375, 0.0};
    hole.eps = 1.0;
    m.inclusions.push_back(hole);
    return m;
}

std::vector<double> dense_window(const HermitianOperator& op, double lo, double hi) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(op.matrix()), Eigen::EigenvaluesOnly);
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()[i] >= lo && es.eigenvalues()[i] <= hi) out.push_back(es.eigenvalues()[i]);
    return out;
}

}  // namespace

TEST(Spectrum, InteriorMatchesDenseOnScalarStrip) {
    MediumSpec m = square_holes();
    StripSpec s;
    s.l = 0.5;
    s.eps_inside = 13.0;
    m.defect = s;
    SupercellSpec sc;
    sc.resolution = 8.0;
    sc.transverse_periods = 8;
    const SampledEpsilon eps = build_supercell(m, sc);
    const ScalarOperator op(eps, {AxisBC::bloch(1.0), AxisBC::bloch(0.0)});
    InteriorOptions o;
    o.count = 6;
    const double lo = 2.0, hi = 6.0;
    InteriorStats st;
    const std::vector<ModeResult> got = interior_eigs(op, lo, hi, o, &st);
    const std::vector<double> ref = dense_window(op, lo, hi);
    ASSERT_EQ(got.size(), ref.size());
    EXPECT_TRUE(st.complete);
    EXPECT_GT(st.slices, 1);
    for (std::size_t i = 0; i < ref.size(); ++i) {
        EXPECT_NEAR(got[i].lambda, ref[i], 1e-8);
        EXPECT_LT(got[i].residual, 1e-6);
    }
}

TEST(Spectrum, InteriorMatchesDenseOnMaxwell) {
    MediumSpec m;
    m.dim = 3;
    Inclusion ball;
    ball.shape = Inclusion::Shape::Ball;
    ball.center = {0.5, 0.5, 0.5};
    ball.radius = 0.3;
    ball.eps = 13.0;
    m.inclusions.push_back(ball);
    GridSpec g;
    g.dim = 3;
    g.n = {8, 8, 8};
    g.h = {1.0 / 8, 1.0 / 8, 1.0 / 8};
    const MaxwellOperator op(build_medium(m, g), {AxisBC::bloch(0.5), AxisBC::wall(), AxisBC::bloch(0.0)});
    InteriorOptions o;
    o.count = 8;
    const double lo = 5.0, hi = 40.0;
    const std::vector<ModeResult> got = interior_eigs(op, lo, hi, o);
    const std::vector<double> ref = dense_window(op, lo, hi);
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i].lambda, ref[i], 1e-8 * hi);
}

TEST(Spectrum, FoldedMethodAgrees) {
    const SampledEpsilon eps = build_unit_cell(square_holes(), 16.0);
    const ScalarOperator op(eps, {AxisBC::bloch(0.7), AxisBC::bloch(0.2)});
    InteriorOptions o;
    o.count = 4;
    o.method = InteriorOptions::Method::Folded;
    o.tol = 1e-12;
    o.max_restarts = 4000;
    const std::vector<ModeResult> got = interior_eigs(op, 5.0, 40.0, o);
    const std::vector<double> ref = dense_window(op, 5.0, 40.0);
    ASSERT_EQ(got.size(), ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(got[i].lambda, ref[i], 1e-6);
}

TEST(Spectrum, LayeredGapMatchesTransferMatrix) {
    const SampledEpsilon cell = build_unit_cell(layered_stack(), 64.0);
    std::vector<Vec3> path;
    for (int i = 0; i <= 8; ++i) path.push_back({0.0, i * std::numbers::pi / 8.0, 0.0});
    const GapList gl = find_gaps(band_structure(cell, path, 3), 0.1);
    ASSERT_FALSE(gl.gaps.empty());
    // Transfer-matrix trace condition for the 13/1 half-filled stack.
    EXPECT_NEAR(gl.gaps[0].alpha, 0.89842490, 0.01 * 0.89842490);
    EXPECT_NEAR(gl.gaps[0].beta, 2.59874716, 0.01 * 2.59874716);
}

TEST(Spectrum, HomogeneousBandsAreFreeDispersion) {
    MediumSpec m;
    m.dim = 2;
    m.background = 2.0;
    const SampledEpsilon cell = build_unit_cell(m, 32.0);
    const BandTable bt = band_structure(cell, {{0.5, 0.0, 0.0}}, 2);
    const double h = 1.0 / 32;
    const double sym = std::pow(2.0 / h * std::sin(0.25 * h), 2) / 2.0;
    EXPECT_NEAR(bt.bands[0][0], sym, 1e-9);
}

TEST(Spectrum, FindGapsMergesOverlaps) {
    BandTable bt;
    bt.k = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    bt.bands = {{0.0, 1.0, 3.0, 3.2}, {0.5, 1.5, 3.1, 4.0}, {0.7, 2.0, 2.9, 5.0}};
    EXPECT_EQ(find_gaps(bt, 0.05).gaps.size(), 3u);  // (0.7, 1), (2, 2.9), (3.1, 3.2)
    const GapList gl = find_gaps(bt, 0.5);
    ASSERT_EQ(gl.gaps.size(), 1u);
    EXPECT_DOUBLE_EQ(gl.gaps[0].alpha, 2.0);
    EXPECT_DOUBLE_EQ(gl.gaps[0].beta, 2.9);
    EXPECT_EQ(gl.k_samples, 3);
    EXPECT_TRUE(find_gaps(bt, 1.0).gaps.empty());
    EXPECT_DOUBLE_EQ(find_gaps(bt, 0.05).gaps[0].alpha, 0.7);
}

TEST(Spectrum, Sampling) {
    const std::vector<double> mu = uniform_mu({1.0, 2.0}, 9);
    ASSERT_EQ(mu.size(), 9u);
    EXPECT_DOUBLE_EQ(mu.front(), 1.1);
    EXPECT_DOUBLE_EQ(mu.back(), 1.9);
    const std::vector<double> k = uniform_k1(0.5, 5);
    ASSERT_EQ(k.size(), 5u);
    EXPECT_DOUBLE_EQ(k.front(), 0.0);
    EXPECT_NEAR(k.back(), 2.0 * std::numbers::pi, 1e-14);
    EXPECT_THROW(uniform_mu({2.0, 1.0}, 3), ValidationError);
    EXPECT_THROW(uniform_k1(0.0, 3), ValidationError);
    EXPECT_EQ(irreducible_path({1, 1, 1}, 2, 4).size(), 13u);
}

TEST(Spectrum, DefectSpectrumCoversGapOnStrip) {
    MediumSpec m = square_holes();
    StripSpec s;
    s.l = 1.0;
    s.eps_inside = 13.0;
    m.defect = s;
    SupercellSpec sc;
    sc.resolution = 8.0;
    sc.transverse_periods = 8;
    const SampledEpsilon eps = build_supercell(m, sc);
    const GapInterval gap{2.7, 4.7};
    const DefectSpectrum ds = defect_spectrum(eps, gap, {0.0, 1.5, 3.0}, 10.0, uniform_mu(gap, 3), Transverse::Periodic);
    EXPECT_TRUE(ds.all_covered);
    for (std::size_t i = 1; i < ds.modes.size(); ++i) EXPECT_LE(ds.modes[i - 1].k1, ds.modes[i].k1);
    for (const auto& md : ds.modes) EXPECT_TRUE(md.lambda >= gap.alpha && md.lambda <= gap.beta);
    EXPECT_THROW(defect_spectrum(eps, gap, {}, 1.0, {}, Transverse::Periodic), ValidationError);
    EXPECT_THROW(defect_spectrum(eps, {3.0, 2.0}, {0.0}, 1.0, {}, Transverse::Periodic), ValidationError);
}
