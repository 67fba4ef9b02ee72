#include <cmath>
#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "nfe/binary_sketch.hpp"
#include "nfe/prng.hpp"

namespace {

using nfe::BitVector;
using nfe::CodeLayout;

TEST(Binarize, SignRule) {
    const auto bits = nfe::binarize({1.5, -0.1, 0.0, -0.0, 2e-300, -2e-300});
    ASSERT_EQ(bits.size(), 6u);
    EXPECT_TRUE(bits.get(0));
    EXPECT_FALSE(bits.get(1));
    EXPECT_TRUE(bits.get(2));  // +0 -> 1
    EXPECT_TRUE(bits.get(3));  // -0 compares equal to 0, so -0 -> 1 as well
    EXPECT_TRUE(bits.get(4));
    EXPECT_FALSE(bits.get(5));
}

TEST(Binarize, NonFiniteThrows) {
    EXPECT_THROW(nfe::binarize({1.0, std::nan("")}), std::invalid_argument);
    EXPECT_THROW(nfe::binarize({INFINITY}), std::invalid_argument);
}

TEST(LayoutForDim, BlockArithmetic) {
    const auto l7 = nfe::layout_for_dim(128, nfe::kCodeIdHamming7);
    EXPECT_EQ(l7.block_count, 19u);  // ceil(128/7)
    EXPECT_EQ(l7.pad_bits, 5u);      // 19*7 - 128
    EXPECT_EQ(nfe::coded_length(l7), 133u);
    EXPECT_EQ(nfe::template_length(l7), 128u);

    const auto l15 = nfe::layout_for_dim(128, nfe::kCodeIdHamming15);
    EXPECT_EQ(l15.block_count, 9u);  // ceil(128/15)
    EXPECT_EQ(l15.pad_bits, 7u);
    EXPECT_EQ(nfe::coded_length(l15), 135u);

    const auto exact = nfe::layout_for_dim(14, nfe::kCodeIdHamming7);
    EXPECT_EQ(exact.block_count, 2u);
    EXPECT_EQ(exact.pad_bits, 0u);

    EXPECT_THROW(nfe::layout_for_dim(0, nfe::kCodeIdHamming7), std::invalid_argument);
    EXPECT_THROW(nfe::layout_for_dim(8, 99), std::invalid_argument);
}

BitVector random_bits(nfe::Xoshiro256& rng, std::size_t len) {
    BitVector bits(len);
    for (std::size_t i = 0; i < len; ++i) bits.set(i, rng.uniform_below(2) == 1);
    return bits;
}

TEST(BinarySketch, TemplateEqualsCodewordXorDv) {
    nfe::Xoshiro256 rng(81);
    for (std::uint16_t code_id : {nfe::kCodeIdHamming7, nfe::kCodeIdHamming15}) {
        const auto layout = nfe::layout_for_dim(40, code_id);
        for (int trial = 0; trial < 20; ++trial) {
            const auto tpl = random_bits(rng, 40);
            const auto result = nfe::make_binary_sketch(layout, tpl);
            const auto padded = tpl.resized(nfe::coded_length(layout));
            EXPECT_EQ(result.codeword ^ result.sketch.dv_bits, padded);
        }
    }
}

TEST(BinarySketch, RecoversWithinCorrectionRadius) {
    nfe::Xoshiro256 rng(83);
    const auto layout = nfe::layout_for_dim(35, nfe::kCodeIdHamming7);  // 5 blocks, 0 pad
    for (int trial = 0; trial < 50; ++trial) {
        const auto tpl = random_bits(rng, 35);
        const auto sketch = nfe::make_binary_sketch(layout, tpl).sketch;

        // one flipped bit per block stays within t = 1
        auto probe = tpl;
        for (int b = 0; b < 5; ++b) {
            const auto pos = static_cast<std::size_t>(b) * 7 + rng.uniform_below(7);
            probe.set(pos, !probe.get(pos));
        }
        const auto recovered = nfe::recover_binary_center(layout, sketch, probe);
        ASSERT_TRUE(recovered.has_value());
        EXPECT_EQ(*recovered, tpl);
    }
}

TEST(BinarySketch, TwoErrorsInOneBlockMisrecover) {
    nfe::Xoshiro256 rng(87);
    const auto layout = nfe::layout_for_dim(21, nfe::kCodeIdHamming7);
    int mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto tpl = random_bits(rng, 21);
        const auto sketch = nfe::make_binary_sketch(layout, tpl).sketch;
        auto probe = tpl;
        probe.set(0, !probe.get(0));
        probe.set(3, !probe.get(3));  // two errors in block 0: beyond t
        const auto recovered = nfe::recover_binary_center(layout, sketch, probe);
        ASSERT_TRUE(recovered.has_value());  // perfect code still decodes somewhere
        if (*recovered != tpl) mismatches += 1;
    }
    EXPECT_EQ(mismatches, 50);  // t+1 errors always land on a wrong codeword
}

TEST(BinarySketch, PaddedTailRoundTrips) {
    nfe::Xoshiro256 rng(89);
    const auto layout = nfe::layout_for_dim(10, nfe::kCodeIdHamming7);  // 2 blocks, 4 pad bits
    const auto tpl = random_bits(rng, 10);
    const auto sketch = nfe::make_binary_sketch(layout, tpl).sketch;
    const auto recovered = nfe::recover_binary_center(layout, sketch, tpl);
    ASSERT_TRUE(recovered.has_value());
    EXPECT_EQ(recovered->size(), 10u);
    EXPECT_EQ(*recovered, tpl);
}

TEST(BinarySketch, LengthChecks) {
    const auto layout = nfe::layout_for_dim(10, nfe::kCodeIdHamming7);
    EXPECT_THROW(nfe::make_binary_sketch(layout, BitVector(11)), std::invalid_argument);
    const auto sketch = nfe::make_binary_sketch(layout, BitVector(10)).sketch;
    EXPECT_THROW(nfe::recover_binary_center(layout, sketch, BitVector(11)),
                 std::invalid_argument);
    auto other = sketch;
    other.layout = nfe::layout_for_dim(10, nfe::kCodeIdHamming15);
    EXPECT_THROW(nfe::recover_binary_center(other.layout, sketch, BitVector(10)),
                 std::invalid_argument);
}

TEST(LayoutSerialization, RoundTripAndValidation) {
    const auto layout = nfe::layout_for_dim(128, nfe::kCodeIdHamming15);
    const auto bytes = nfe::serialize_layout(layout);
    EXPECT_EQ(bytes.size(), 6u);
    EXPECT_EQ(nfe::deserialize_layout(bytes), layout);

    auto bad_id = bytes;
    bad_id[0] = 0x63;
    EXPECT_THROW(nfe::deserialize_layout(bad_id), std::exception);

    auto zero_blocks = bytes;
    zero_blocks[2] = 0;
    zero_blocks[3] = 0;
    EXPECT_THROW(nfe::deserialize_layout(zero_blocks), nfe::FormatError);

    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(nfe::deserialize_layout(trailing), nfe::FormatError);

    auto huge_pad = bytes;
    huge_pad[4] = 0xff;
    huge_pad[5] = 0xff;
    EXPECT_THROW(nfe::deserialize_layout(huge_pad), nfe::FormatError);
}

}  // namespace
