#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "nfe/linear_code.hpp"
#include "nfe/prng.hpp"

namespace {

using nfe::BitVector;
using nfe::LinearCode;

BitVector word_from_bits(std::uint32_t value, std::size_t n) {
    BitVector w(n);
    for (std::size_t i = 0; i < n; ++i) w.set(i, (value >> i) & 1);
    return w;
}

std::vector<BitVector> all_codewords(const LinearCode& code) {
    std::vector<BitVector> words;
    for (std::uint32_t m = 0; m < (1u << code.k()); ++m)
        words.push_back(code.encode(word_from_bits(m, code.k())));
    return words;
}

std::uint32_t bits_as_unsigned(const BitVector& w) {
    std::uint32_t value = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w.get(i)) value |= 1u << i;
    return value;
}

TEST(Hamming74, CodeParameters) {
    const auto code = LinearCode::hamming_7_4();
    EXPECT_EQ(code.n(), 7u);
    EXPECT_EQ(code.k(), 4u);
    EXPECT_EQ(code.t(), 1u);
    EXPECT_EQ(code.code_id(), nfe::kCodeIdHamming7);
}

TEST(Hamming74, MinimumDistanceIsThree) {
    const auto words = all_codewords(LinearCode::hamming_7_4());
    ASSERT_EQ(words.size(), 16u);
    std::size_t min_weight = 7;
    std::set<std::uint32_t> distinct;
    for (const auto& w : words) {
        distinct.insert(bits_as_unsigned(w));
        if (w.weight() > 0) min_weight = std::min(min_weight, w.weight());
    }
    EXPECT_EQ(distinct.size(), 16u);
    EXPECT_EQ(min_weight, 3u);
}

TEST(Hamming74, LinearClosure) {
    const auto code = LinearCode::hamming_7_4();
    const auto words = all_codewords(code);
    for (const auto& a : words)
        for (const auto& b : words) EXPECT_EQ(code.syndrome(a ^ b), 0u);
}

TEST(Hamming74, SyndromeZeroExactlyOnCodewords) {
    const auto code = LinearCode::hamming_7_4();
    std::set<std::uint32_t> codeword_set;
    for (const auto& w : all_codewords(code)) codeword_set.insert(bits_as_unsigned(w));
    for (std::uint32_t v = 0; v < 128; ++v) {
        const auto w = word_from_bits(v, 7);
        EXPECT_EQ(code.syndrome(w) == 0, codeword_set.count(v) == 1);
    }
}

// Exhaustive minimum-distance decoding as the oracle.
BitVector min_distance_decode(const std::vector<BitVector>& codewords, const BitVector& word) {
    const BitVector* best = nullptr;
    std::size_t best_dist = static_cast<std::size_t>(-1);
    for (const auto& c : codewords) {
        const auto d = nfe::hamming_distance(c, word);
        if (d < best_dist) {
            best_dist = d;
            best = &c;
        }
    }
    return *best;
}

TEST(Hamming74, SyndromeDecodeMatchesExhaustiveOracle) {
    const auto code = LinearCode::hamming_7_4();
    const auto words = all_codewords(code);
    for (std::uint32_t v = 0; v < 128; ++v) {
        const auto w = word_from_bits(v, 7);
        const auto decoded = code.syndrome_decode(w);
        ASSERT_TRUE(decoded.has_value());  // perfect code: every word decodes
        EXPECT_EQ(*decoded, min_distance_decode(words, w)) << "word " << v;
    }
}

TEST(Hamming1511, SyndromeDecodeMatchesExhaustiveOracle) {
    const auto code = LinearCode::hamming_15_11();
    EXPECT_EQ(code.n(), 15u);
    EXPECT_EQ(code.k(), 11u);
    const auto words = all_codewords(code);
    ASSERT_EQ(words.size(), 2048u);
    nfe::Xoshiro256 rng(71);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto w = word_from_bits(static_cast<std::uint32_t>(rng.uniform_below(1u << 15)), 15);
        const auto decoded = code.syndrome_decode(w);
        ASSERT_TRUE(decoded.has_value());
        EXPECT_EQ(*decoded, min_distance_decode(words, w));
    }
}

TEST(Hamming, CorrectsEverySingleBitError) {
    for (const auto& code : {LinearCode::hamming_7_4(), LinearCode::hamming_15_11()}) {
        nfe::Xoshiro256 rng(73);
        for (int trial = 0; trial < 50; ++trial) {
            BitVector message(code.k());
            for (std::size_t i = 0; i < code.k(); ++i) message.set(i, rng.uniform_below(2) == 1);
            const auto codeword = code.encode(message);
            for (std::size_t pos = 0; pos < code.n(); ++pos) {
                auto corrupted = codeword;
                corrupted.set(pos, !corrupted.get(pos));
                const auto decoded = code.syndrome_decode(corrupted);
                ASSERT_TRUE(decoded.has_value());
                EXPECT_EQ(*decoded, codeword);
            }
        }
    }
}

TEST(Hamming, DoubleBitErrorDecodesToWrongCodeword) {
    const auto code = LinearCode::hamming_7_4();
    const auto codeword = code.encode(word_from_bits(0b1011, 4));
    auto corrupted = codeword;
    corrupted.set(0, !corrupted.get(0));
    corrupted.set(3, !corrupted.get(3));
    const auto decoded = code.syndrome_decode(corrupted);
    ASSERT_TRUE(decoded.has_value());  // perfect code always lands somewhere
    EXPECT_NE(*decoded, codeword);
    EXPECT_EQ(code.syndrome(*decoded), 0u);
}

TEST(FromId, RoundTripAndUnknown) {
    EXPECT_EQ(LinearCode::from_id(nfe::kCodeIdHamming7).n(), 7u);
    EXPECT_EQ(LinearCode::from_id(nfe::kCodeIdHamming15).n(), 15u);
    EXPECT_THROW(LinearCode::from_id(99), std::invalid_argument);
}

// Length-4 repetition code (d = 4): corrects 1 error but is not perfect, so
// some syndromes have no weight-1 coset leader and decoding must report that.
LinearCode repetition4() {
    std::vector<BitVector> rows;
    for (int j = 0; j < 3; ++j) {
        BitVector row(4);
        row.set(0, true);
        row.set(1 + static_cast<std::size_t>(j), true);
        rows.push_back(row);
    }
    return LinearCode(4, 1, 1, rows, 0);
}

TEST(NonPerfectCode, UncorrectableSyndromeGivesNullopt) {
    const auto code = repetition4();
    EXPECT_EQ(code.encode(word_from_bits(1, 1)), word_from_bits(0b1111, 4));

    // weight-1 errors decode
    for (std::size_t pos = 0; pos < 4; ++pos) {
        auto w = word_from_bits(0b1111, 4);
        w.set(pos, false);
        const auto decoded = code.syndrome_decode(w);
        ASSERT_TRUE(decoded.has_value());
        EXPECT_EQ(*decoded, word_from_bits(0b1111, 4));
    }
    // weight-2 errors are detectable but not correctable
    EXPECT_FALSE(code.syndrome_decode(word_from_bits(0b0011, 4)).has_value());
    EXPECT_FALSE(code.syndrome_decode(word_from_bits(0b0101, 4)).has_value());
}

TEST(LinearCode, ConstructorValidation) {
    std::vector<BitVector> rows{BitVector(4), BitVector(4), BitVector(4)};
    EXPECT_THROW(LinearCode(4, 4, 1, rows, 0), std::invalid_argument);  // k >= n
    EXPECT_THROW(LinearCode(4, 1, 1, {BitVector(4)}, 0), std::invalid_argument);  // row count
    EXPECT_THROW(LinearCode(4, 1, 1, {BitVector(3), BitVector(3), BitVector(3)}, 0),
                 std::invalid_argument);  // row length
    // t = 2 on the repetition-4 code: weight-2 patterns collide in syndrome space
    std::vector<BitVector> rep_rows;
    for (int j = 0; j < 3; ++j) {
        BitVector row(4);
        row.set(0, true);
        row.set(1 + static_cast<std::size_t>(j), true);
        rep_rows.push_back(row);
    }
    EXPECT_THROW(LinearCode(4, 1, 2, rep_rows, 0), std::invalid_argument);
}

}  // namespace
