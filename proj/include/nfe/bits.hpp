#pragma once

// Packed bit vectors. Bit i lives in byte i/8 at position i%8 (little-endian
// within bytes); unused bits of the last byte are kept zero so equal vectors
// have equal byte representations.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace nfe {

class BitVector {
public:
    BitVector() = default;

    explicit BitVector(std::size_t len) : bytes_((len + 7) / 8, 0), len_(len) {}

    BitVector(std::vector<std::uint8_t> bytes, std::size_t len)
        : bytes_(std::move(bytes)), len_(len) {
        if (bytes_.size() != (len_ + 7) / 8)
            throw std::invalid_argument("BitVector: byte count does not match length");
        mask_tail();
    }

    std::size_t size() const noexcept { return len_; }
    const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }

    bool get(std::size_t i) const {
        check(i);
        return (bytes_[i >> 3] >> (i & 7)) & 1;
    }

    void set(std::size_t i, bool value) {
        check(i);
        const std::uint8_t mask = static_cast<std::uint8_t>(1u << (i & 7));
        if (value)
            bytes_[i >> 3] |= mask;
        else
            bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }

    BitVector operator^(const BitVector& other) const {
        if (len_ != other.len_) throw std::invalid_argument("BitVector xor: length mismatch");
        BitVector out(len_);
        for (std::size_t i = 0; i < bytes_.size(); ++i)
            out.bytes_[i] = static_cast<std::uint8_t>(bytes_[i] ^ other.bytes_[i]);
        return out;
    }

    std::size_t weight() const {
        std::size_t w = 0;
        for (auto b : bytes_) w += static_cast<std::size_t>(std::popcount(b));
        return w;
    }

    // Bits [offset, offset+count) as a new vector.
    BitVector slice(std::size_t offset, std::size_t count) const {
        if (offset + count > len_) throw std::invalid_argument("BitVector slice: out of range");
        BitVector out(count);
        for (std::size_t i = 0; i < count; ++i) out.set(i, get(offset + i));
        return out;
    }

    // Truncated or zero-padded copy of the given length.
    BitVector resized(std::size_t new_len) const {
        BitVector out(new_len);
        const std::size_t n = std::min(new_len, len_);
        for (std::size_t i = 0; i < n; ++i) out.set(i, get(i));
        return out;
    }

    bool operator==(const BitVector&) const = default;

private:
    void check(std::size_t i) const {
        if (i >= len_) throw std::out_of_range("BitVector: index out of range");
    }

    void mask_tail() {
        if (len_ % 8 != 0 && !bytes_.empty())
            bytes_.back() &= static_cast<std::uint8_t>((1u << (len_ % 8)) - 1);
    }

    std::vector<std::uint8_t> bytes_;
    std::size_t len_ = 0;
};

inline std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
    return (a ^ b).weight();
}

}  // namespace nfe
