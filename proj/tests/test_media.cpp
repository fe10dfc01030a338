#include <gtest/gtest.h>

#include "gapguide/errors.hpp"
#include "gapguide/media.hpp"

using namespace gapguide;

namespace {

MediumSpec square_holes() {
    MediumSpec m;
    m.dim = 2;
    m.period = {1.0, 1.0, 1.0};
    m.background = 13.0;
    Inclusion hole;
    hole.shape = Inclusion::Shape::Box;
    hole.center = {0.5, 0.5, 0.0};
    hole.half = {0.375, 0.375, 0.0};
    hole.eps = 1.0;
    m.inclusions.push_back(hole);
    return m;
}

}  // namespace

TEST(Media, PeriodicEvaluation) {
    const MediumSpec m = square_holes();
    EXPECT_DOUBLE_EQ(m.eps_at({0.5, 0.5, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(m.eps_at({1.5, -0.5, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(m.eps_at({0.05, 0.5, 0.0}), 13.0);
    EXPECT_DOUBLE_EQ(m.c0(), 1.0);
    EXPECT_DOUBLE_EQ(m.c1(), 13.0);
}

TEST(Media, SamplingAndDefect) {
    MediumSpec m = square_holes();
    GridSpec g;
    g.dim = 2;
    g.n = {8, 32, 1};
    g.h = {0.125, 0.125, 1.0};
    g.origin = {0.0, -2.0, 0.0};
    const SampledEpsilon e0 = build_medium(m, g);
    EXPECT_EQ(e0.values.size(), 8 * 32);
    StripSpec s;
    s.cross_section = CrossSection::interval(-1.0, 1.0);
    s.l = 0.5;
    s.eps_inside = 7.0;
    const SampledEpsilon e1 = with_defect(e0, s);
    ASSERT_TRUE(e1.strip.has_value());
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 32; ++j) {
            const double y = g.center(1, j);
            if (std::abs(y) < 0.5) EXPECT_DOUBLE_EQ(e1.at(i, j), 7.0);
            else EXPECT_DOUBLE_EQ(e1.at(i, j), e0.at(i, j));
        }
}

TEST(Media, JsonRoundTrip) {
    MediumSpec m = square_holes();
    StripSpec s;
    s.l = 2.0;
    s.eps_inside = 4.0;
    m.defect = s;
    const MediumSpec r = MediumSpec::from_json(m.to_json());
    EXPECT_EQ(r.inclusions.size(), 1u);
    ASSERT_TRUE(r.defect.has_value());
    EXPECT_DOUBLE_EQ(r.defect->l, 2.0);
    EXPECT_DOUBLE_EQ(r.eps_at({0.5, 0.5, 0.0}), 1.0);
}

TEST(Media, RejectsNonpositivePermittivity) {
    MediumSpec m = square_holes();
    m.inclusions[0].eps = -1.0;
    EXPECT_THROW(m.validate(), ValidationError);
}

TEST(Media, WindowNormOfConstantField) {
    GridSpec g;
    g.dim = 2;
    g.n = {40, 40, 1};
    g.h = {0.1, 0.1, 1.0};
    g.origin = {-2.0, -2.0, 0.0};
    const SampleLattice lat = cell_centers(g);
    const Eigen::VectorXcd u = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(lat.size()));
    CubeWindow w;
    w.center = {0.0, 0.0, 0.0};
    w.half_side = 1.0;
    const WindowNorm n = window_norm(lat, u, w);
    EXPECT_FALSE(n.empty);
    EXPECT_NEAR(n.value, 2.0, 1e-12);  // sqrt(area 4)
}
