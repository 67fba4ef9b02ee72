#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "nfe/geometry.hpp"
#include "nfe/prng.hpp"

namespace {

using nfe::Vec;

TEST(QuantileIndex, MatchesCeilDefinition) {
    // smallest index covering at least fraction q: ceil(q*n) - 1
    EXPECT_EQ(nfe::detail::quantile_index(1, 0.95), 0u);
    EXPECT_EQ(nfe::detail::quantile_index(10, 1.0), 9u);
    EXPECT_EQ(nfe::detail::quantile_index(10, 0.95), 9u);
    EXPECT_EQ(nfe::detail::quantile_index(10, 0.90), 8u);
    EXPECT_EQ(nfe::detail::quantile_index(10, 0.05), 0u);
    EXPECT_EQ(nfe::detail::quantile_index(20, 0.95), 18u);
    EXPECT_EQ(nfe::detail::quantile_index(12, 0.5), 5u);
}

TEST(FitUserRegion, CenterIsMeanRadiusIsQuantile) {
    const std::vector<Vec> points{{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {2.0, 2.0}};
    const auto region = nfe::fit_user_region(points, 1.0, "alice");
    EXPECT_EQ(region.user_id, "alice");
    ASSERT_EQ(region.center.size(), 2u);
    EXPECT_DOUBLE_EQ(region.center[0], 1.0);
    EXPECT_DOUBLE_EQ(region.center[1], 1.0);
    EXPECT_DOUBLE_EQ(region.radius, std::sqrt(2.0));  // all points equidistant
}

TEST(FitUserRegion, QuantileAgainstSortedOracle) {
    nfe::Xoshiro256 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec> points;
        const std::size_t n = 3 + trial;
        for (std::size_t i = 0; i < n; ++i)
            points.push_back({rng.gaussian(), rng.gaussian(), rng.gaussian()});
        for (double q : {0.1, 0.5, 0.9, 0.95, 1.0}) {
            const auto region = nfe::fit_user_region(points, q);
            std::vector<double> dists;
            for (const auto& p : points) dists.push_back(nfe::distance(p, region.center));
            std::sort(dists.begin(), dists.end());
            const std::size_t k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))) - 1;
            EXPECT_DOUBLE_EQ(region.radius, std::max(dists[k], nfe::kRadiusFloor));
        }
    }
}

TEST(FitUserRegion, RadiusFloorForIdenticalPoints) {
    const std::vector<Vec> points{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}};
    const auto region = nfe::fit_user_region(points, 0.95);
    EXPECT_EQ(region.radius, nfe::kRadiusFloor);
}

TEST(FitUserRegion, Errors) {
    EXPECT_THROW(nfe::fit_user_region({}, 0.95), std::invalid_argument);
    const std::vector<Vec> points{{1.0}};
    EXPECT_THROW(nfe::fit_user_region(points, 0.0), std::invalid_argument);
    EXPECT_THROW(nfe::fit_user_region(points, 1.5), std::invalid_argument);
}

TEST(FitSupportSphere, MaxDistanceTimesInflation) {
    const std::vector<Vec> points{{0.0, 0.0}, {4.0, 0.0}};
    const auto sphere = nfe::fit_support_sphere(points, 0.10);
    EXPECT_DOUBLE_EQ(sphere.center[0], 2.0);
    EXPECT_DOUBLE_EQ(sphere.center[1], 0.0);
    EXPECT_DOUBLE_EQ(sphere.radius, 2.0 * 1.1);
    const auto tight = nfe::fit_support_sphere(points, 0.0);
    EXPECT_DOUBLE_EQ(tight.radius, 2.0);
    EXPECT_THROW(nfe::fit_support_sphere(points, -0.1), std::invalid_argument);
    EXPECT_THROW(nfe::fit_support_sphere({}, 0.1), std::invalid_argument);
}

TEST(FitSupportSphere, CoversAllPoints) {
    nfe::Xoshiro256 rng(23);
    std::vector<Vec> points;
    for (int i = 0; i < 40; ++i) points.push_back({rng.gaussian(), rng.gaussian()});
    const auto sphere = nfe::fit_support_sphere(points, 0.10);
    for (const auto& p : points) EXPECT_LE(nfe::distance(p, sphere.center), sphere.radius);
}

TEST(SpherePackingEntropy, CalibrationValues) {
    // 128 dims, support 1.0153, region 0.7: about 68.7 bits and 4.7e20 regions
    const auto bound = nfe::sphere_packing_entropy(128, 1.0153, 0.7);
    EXPECT_GE(bound.bits, 68.0);
    EXPECT_LE(bound.bits, 69.0);
    EXPECT_GE(bound.count, 4.2e20);
    EXPECT_LE(bound.count, 5.2e20);
    EXPECT_NEAR(bound.count, std::exp2(bound.bits), bound.count * 1e-12);
}

TEST(SpherePackingEntropy, DimLinearity) {
    const auto one = nfe::sphere_packing_entropy(1, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(one.bits, 2.0);  // log2(4)
    EXPECT_DOUBLE_EQ(one.count, 4.0);
    const auto eight = nfe::sphere_packing_entropy(8, 2.0, 0.5);
    EXPECT_DOUBLE_EQ(eight.bits, 16.0);
}

TEST(SpherePackingEntropy, EqualRadiiGiveZeroBits) {
    const auto bound = nfe::sphere_packing_entropy(64, 0.7, 0.7);
    EXPECT_DOUBLE_EQ(bound.bits, 0.0);
    EXPECT_DOUBLE_EQ(bound.count, 1.0);
}

TEST(SpherePackingEntropy, Errors) {
    EXPECT_THROW(nfe::sphere_packing_entropy(0, 1.0, 0.5), std::invalid_argument);
    EXPECT_THROW(nfe::sphere_packing_entropy(8, 0.5, 1.0), std::invalid_argument);  // R < r
    EXPECT_THROW(nfe::sphere_packing_entropy(8, 1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(nfe::sphere_packing_entropy(8, 1.0, -1.0), std::invalid_argument);
}

}  // namespace
