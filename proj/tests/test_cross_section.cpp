#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "gapguide/cross_section.hpp"
#include "gapguide/errors.hpp"

using namespace gapguide;

TEST(CrossSection, DiskGeometry) {
    const auto d = CrossSection::disk({0.0, 0.0}, 1.0);
    EXPECT_TRUE(d.contains({0.5, 0.5}));
    EXPECT_FALSE(d.contains({0.8, 0.8}));
    EXPECT_NEAR(d.boundary_distance({0.25, 0.0}), 0.75, 1e-14);
    EXPECT_NEAR(d.inradius(), 1.0, 1e-14);
    EXPECT_NEAR(d.measure(), std::numbers::pi, 1e-12);
    EXPECT_NEAR(d.diameter(), 2.0, 1e-14);
    EXPECT_NEAR(d.exit_distance({0.0, 0.0}, {1.0, 0.0}), 1.0, 1e-14);
    EXPECT_NEAR(d.exit_distance({0.5, 0.0}, {-1.0, 0.0}), 1.5, 1e-14);
    EXPECT_TRUE(d.simply_connected());
}

TEST(CrossSection, IntervalAndRect) {
    const auto i = CrossSection::interval(-1.0, 1.0);
    EXPECT_EQ(i.dim(), 1);
    EXPECT_TRUE(i.contains({0.3, 0.0}));
    EXPECT_FALSE(i.contains({1.3, 0.0}));
    EXPECT_NEAR(i.inradius(), 1.0, 1e-14);

    const auto r = CrossSection::rect({0.0, 0.0}, {1.0, 0.5});
    EXPECT_NEAR(r.inradius(), 0.5, 1e-14);
    EXPECT_NEAR(r.measure(), 2.0, 1e-14);
    EXPECT_NEAR(r.boundary_distance({0.9, 0.0}), 0.1, 1e-14);
}

TEST(CrossSection, ScalingMultipliesLengths) {
    const auto d = CrossSection::disk({0.0, 0.0}, 1.0).scaled(2.5);
    EXPECT_NEAR(d.inradius(), 2.5, 1e-14);
    EXPECT_TRUE(d.contains({2.0, 0.0}));
}

TEST(CrossSection, MaskWithHoleIsNotSimplyConnected) {
    const auto solid = CrossSection::mask({"00000", "01110", "01110", "01110", "00000"}, 0.2, {0.0, 0.0});
    EXPECT_TRUE(solid.simply_connected());
    const auto ring = CrossSection::mask({"11111", "10001", "10001", "10001", "11111"}, 0.2, {0.0, 0.0});
    EXPECT_FALSE(ring.simply_connected());
}

TEST(CrossSection, JsonRoundTrip) {
    const auto d = CrossSection::disk({0.1, -0.2}, 0.7);
    const auto e = CrossSection::from_json(d.to_json());
    EXPECT_EQ(e.name(), "disk");
    EXPECT_NEAR(e.inradius(), 0.7, 1e-14);
    EXPECT_NEAR(e.center()[0], 0.1, 1e-14);
}

TEST(CrossSection, RejectsDegenerateShapes) {
    EXPECT_THROW(CrossSection::disk({0.0, 0.0}, -1.0), ValidationError);
    EXPECT_THROW(CrossSection::interval(1.0, 1.0), ValidationError);
}
