#include <cfenv>
#include <cmath>
#include <cstdint>
#include <limits>

#include <gtest/gtest.h>

#include "nfe/fixed.hpp"
#include "nfe/prng.hpp"

namespace {

TEST(ToFixed, ExactGridValues) {
    EXPECT_EQ(nfe::to_fixed(0.0), 0);
    EXPECT_EQ(nfe::to_fixed(1.0), std::int64_t{1} << 20);
    EXPECT_EQ(nfe::to_fixed(-1.0), -(std::int64_t{1} << 20));
    EXPECT_EQ(nfe::to_fixed(0.5), std::int64_t{1} << 19);
    EXPECT_EQ(nfe::to_fixed(-0.25), -(std::int64_t{1} << 18));
    EXPECT_EQ(nfe::to_fixed(0x1.0p-20), 1);
    EXPECT_EQ(nfe::to_fixed(-0x1.0p-20), -1);
}

TEST(ToFixed, TiesGoToEven) {
    // half-grid points: scaled value is exactly k + 0.5
    EXPECT_EQ(nfe::to_fixed(0x1.0p-21), 0);        // 0.5 -> 0
    EXPECT_EQ(nfe::to_fixed(0x1.8p-20), 2);        // 1.5 -> 2
    EXPECT_EQ(nfe::to_fixed(0x1.4p-19), 2);        // 2.5 -> 2
    EXPECT_EQ(nfe::to_fixed(0x1.cp-19), 4);        // 3.5 -> 4
    EXPECT_EQ(nfe::to_fixed(-0x1.0p-21), 0);       // -0.5 -> 0
    EXPECT_EQ(nfe::to_fixed(-0x1.8p-20), -2);      // -1.5 -> -2
    EXPECT_EQ(nfe::to_fixed(-0x1.4p-19), -2);      // -2.5 -> -2
}

TEST(ToFixed, MatchesRintOracle) {
    // multiplication by 2^20 is exact, so llrint in the default
    // round-to-nearest-even mode is an independent oracle
    ASSERT_EQ(std::fegetround(), FE_TONEAREST);
    nfe::Xoshiro256 rng(31);
    for (int i = 0; i < 20000; ++i) {
        const double x = (rng.uniform01() - 0.5) * 2000.0;
        EXPECT_EQ(nfe::to_fixed(x), std::llrint(x * 1048576.0)) << x;
    }
}

TEST(ToFixed, RoundTripErrorBound) {
    nfe::Xoshiro256 rng(32);
    for (int i = 0; i < 10000; ++i) {
        const double x = (rng.uniform01() - 0.5) * 100.0;
        EXPECT_LE(std::fabs(nfe::to_double(nfe::to_fixed(x)) - x), 0x1.0p-21);
    }
}

TEST(ToFixed, Monotone) {
    nfe::Xoshiro256 rng(33);
    double prev_x = -1e5;
    std::int64_t prev_v = std::numeric_limits<std::int64_t>::min();
    for (int i = 0; i < 1000; ++i) {
        const double x = prev_x + rng.uniform01();
        const auto v = nfe::to_fixed(x / 200.0);
        EXPECT_GE(v, prev_v);
        prev_x = x;
        prev_v = v;
    }
}

TEST(ToFixed, RangeGuard) {
    EXPECT_NO_THROW(nfe::to_fixed(1048575.999));
    EXPECT_NO_THROW(nfe::to_fixed(-1048575.999));
    EXPECT_THROW(nfe::to_fixed(1048576.0), std::range_error);   // 2^20
    EXPECT_THROW(nfe::to_fixed(-1048576.0), std::range_error);
    EXPECT_THROW(nfe::to_fixed(1e300), std::range_error);
    EXPECT_THROW(nfe::to_fixed(std::nan("")), std::range_error);
    EXPECT_THROW(nfe::to_fixed(INFINITY), std::range_error);
}

TEST(Quantize, VectorRoundTrip) {
    const nfe::Vec x{0.125, -3.75, 0.0, 511.0};
    const auto q = nfe::quantize(x);
    ASSERT_EQ(q.dim(), 4u);
    EXPECT_EQ(nfe::dequantize(q), x);  // all on the 2^-20 grid
}

TEST(ToDouble, ExactScale) {
    EXPECT_DOUBLE_EQ(nfe::to_double(1048576), 1.0);
    EXPECT_DOUBLE_EQ(nfe::to_double(-524288), -0.5);
    EXPECT_DOUBLE_EQ(nfe::to_double(1), 0x1.0p-20);
}

}  // namespace
