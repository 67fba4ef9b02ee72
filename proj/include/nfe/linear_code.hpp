#pragma once

// Binary linear block codes with syndrome decoding. Shipped codes are the
// perfect Hamming(7,4) and Hamming(15,11); both are small enough that every
// decoding claim is verifiable by exhaustive enumeration.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nfe/bits.hpp"

namespace nfe {

inline constexpr std::uint16_t kCodeIdHamming7 = 1;
inline constexpr std::uint16_t kCodeIdHamming15 = 2;

class LinearCode {
public:
    // Systematic construction: generator [I_k | P], parity check [P^T | I_{n-k}].
    // The syndrome table maps each weight<=t error pattern to itself; a
    // collision means the claimed correction capability is wrong.
    LinearCode(std::size_t n, std::size_t k, std::size_t t,
               std::vector<BitVector> parity_rows, std::uint16_t code_id = 0)
        : n_(n), k_(k), t_(t), parity_rows_(std::move(parity_rows)), code_id_(code_id) {
        if (n_ == 0 || k_ == 0 || k_ >= n_) throw std::invalid_argument("LinearCode: bad (n,k)");
        if (parity_rows_.size() != n_ - k_)
            throw std::invalid_argument("LinearCode: expected n-k parity rows");
        if (n_ - k_ > 32) throw std::invalid_argument("LinearCode: syndrome wider than 32 bits");
        for (const auto& row : parity_rows_)
            if (row.size() != n_) throw std::invalid_argument("LinearCode: parity row length");

        generator_rows_.reserve(k_);
        for (std::size_t i = 0; i < k_; ++i) {
            BitVector row(n_);
            row.set(i, true);
            for (std::size_t j = 0; j < n_ - k_; ++j) row.set(k_ + j, parity_rows_[j].get(i));
            generator_rows_.push_back(std::move(row));
        }
        for (const auto& g : generator_rows_)
            if (syndrome(g) != 0) throw std::invalid_argument("LinearCode: G.H^T != 0");

        build_syndrome_table();
    }

    static LinearCode hamming_7_4() { return hamming(3, kCodeIdHamming7); }
    static LinearCode hamming_15_11() { return hamming(4, kCodeIdHamming15); }

    static LinearCode from_id(std::uint16_t id) {
        switch (id) {
            case kCodeIdHamming7: return hamming_7_4();
            case kCodeIdHamming15: return hamming_15_11();
            default: throw std::invalid_argument("LinearCode: unknown code id " + std::to_string(id));
        }
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t k() const noexcept { return k_; }
    std::size_t t() const noexcept { return t_; }
    std::uint16_t code_id() const noexcept { return code_id_; }
    const std::vector<BitVector>& generator_rows() const noexcept { return generator_rows_; }

    std::uint32_t syndrome(const BitVector& word) const {
        if (word.size() != n_) throw std::invalid_argument("syndrome: word length mismatch");
        std::uint32_t s = 0;
        for (std::size_t j = 0; j < parity_rows_.size(); ++j)
            s |= static_cast<std::uint32_t>(parity_bit(parity_rows_[j], word)) << j;
        return s;
    }

    BitVector encode(const BitVector& message) const {
        if (message.size() != k_) throw std::invalid_argument("encode: message length mismatch");
        BitVector word(n_);
        for (std::size_t i = 0; i < k_; ++i)
            if (message.get(i)) word = word ^ generator_rows_[i];
        return word;
    }

    // Minimum-Hamming-distance codeword for any word within distance t;
    // nullopt when the syndrome has no weight<=t pattern (non-perfect codes).
    std::optional<BitVector> syndrome_decode(const BitVector& word) const {
        const std::uint32_t s = syndrome(word);
        const auto it = syndrome_table_.find(s);
        if (it == syndrome_table_.end()) return std::nullopt;
        return word ^ it->second;
    }

private:
    static bool parity_bit(const BitVector& row, const BitVector& word) {
        std::size_t acc = 0;
        for (std::size_t i = 0; i < word.size(); ++i)
            acc ^= static_cast<std::size_t>(row.get(i) && word.get(i));
        return acc != 0;
    }

    // Hamming code with m parity bits: parity-check columns are all nonzero
    // m-bit values, data columns (weight >= 2) first, identity columns last.
    static LinearCode hamming(std::size_t m, std::uint16_t id) {
        const std::size_t n = (std::size_t{1} << m) - 1;
        const std::size_t k = n - m;
        std::vector<std::uint32_t> data_cols;
        for (std::uint32_t v = 1; v <= n; ++v)
            if (std::popcount(v) >= 2) data_cols.push_back(v);

        std::vector<BitVector> parity_rows(m, BitVector(n));
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < k; ++i)
                parity_rows[j].set(i, (data_cols[i] >> j) & 1);
            parity_rows[j].set(k + j, true);
        }
        return LinearCode(n, k, 1, std::move(parity_rows), id);
    }

    void build_syndrome_table() {
        syndrome_table_.emplace(0, BitVector(n_));
        // weight-1 patterns, then weight-2, ... up to t
        std::vector<std::vector<std::size_t>> combos{{}};
        for (std::size_t w = 1; w <= t_; ++w) {
            std::vector<std::vector<std::size_t>> next;
            for (const auto& c : combos) {
                const std::size_t start = c.empty() ? 0 : c.back() + 1;
                for (std::size_t i = start; i < n_; ++i) {
                    auto grown = c;
                    grown.push_back(i);
                    next.push_back(grown);
                }
            }
            for (const auto& c : next) {
                BitVector pattern(n_);
                for (auto i : c) pattern.set(i, true);
                const auto s = syndrome(pattern);
                if (!syndrome_table_.emplace(s, pattern).second)
                    throw std::invalid_argument("LinearCode: duplicate syndrome; t too large");
            }
            combos = std::move(next);
        }
    }

    std::size_t n_, k_, t_;
    std::vector<BitVector> parity_rows_;
    std::vector<BitVector> generator_rows_;
    std::unordered_map<std::uint32_t, BitVector> syndrome_table_;
    std::uint16_t code_id_;
};

}  // namespace nfe
