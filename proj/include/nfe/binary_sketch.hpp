#pragma once

// GF(2) variant of the sketch: sign-binarized embeddings, per-block syndrome
// decoding, and an XOR difference vector. The per-block correction
// capability t plays the role of the radius-r decision sphere.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nfe/binary_io.hpp"
#include "nfe/bits.hpp"
#include "nfe/embedding.hpp"
#include "nfe/errors.hpp"
#include "nfe/linear_code.hpp"

namespace nfe {

// Sign quantization; zero maps to 1 so the rule is total and deterministic.
inline BitVector binarize(const Vec& x) {
    BitVector bits(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw std::invalid_argument("binarize: non-finite value");
        bits.set(i, x[i] >= 0.0);
    }
    return bits;
}

// Blocks of one code concatenated to cover the template length; pad bits are
// zero-filled before block operations, stripped after recovery, and carry no
// entropy.
struct CodeLayout {
    std::uint16_t code_id = kCodeIdHamming7;
    std::uint16_t block_count = 0;
    std::uint16_t pad_bits = 0;

    bool operator==(const CodeLayout&) const = default;
};

inline CodeLayout layout_for_dim(std::size_t dim, std::uint16_t code_id) {
    const LinearCode code = LinearCode::from_id(code_id);
    if (dim == 0) throw std::invalid_argument("layout_for_dim: dim must be positive");
    const std::size_t blocks = (dim + code.n() - 1) / code.n();
    CodeLayout layout;
    layout.code_id = code_id;
    layout.block_count = static_cast<std::uint16_t>(blocks);
    layout.pad_bits = static_cast<std::uint16_t>(blocks * code.n() - dim);
    return layout;
}

inline std::size_t coded_length(const CodeLayout& layout) {
    return static_cast<std::size_t>(layout.block_count) * LinearCode::from_id(layout.code_id).n();
}

inline std::size_t template_length(const CodeLayout& layout) {
    return coded_length(layout) - layout.pad_bits;
}

struct BinarySketch {
    BitVector dv_bits;  // template XOR nearest codeword, over all blocks
    CodeLayout layout;

    bool operator==(const BinarySketch&) const = default;
};

struct BinarySketchResult {
    BinarySketch sketch;
    BitVector codeword;  // concatenated per-block codewords (padded length)
};

namespace detail {

inline void paste(BitVector& dst, const BitVector& src, std::size_t offset) {
    for (std::size_t i = 0; i < src.size(); ++i) dst.set(offset + i, src.get(i));
}

}  // namespace detail

// Registration: per block, decode the template to its nearest codeword and
// keep the XOR offset. template == codeword XOR dv exactly.
inline BinarySketchResult make_binary_sketch(const CodeLayout& layout, const BitVector& template_bits) {
    if (template_bits.size() != template_length(layout))
        throw std::invalid_argument("make_binary_sketch: template length mismatch");

    const LinearCode code = LinearCode::from_id(layout.code_id);
    const BitVector padded = template_bits.resized(coded_length(layout));

    BinarySketchResult result;
    result.sketch.layout = layout;
    result.sketch.dv_bits = BitVector(padded.size());
    result.codeword = BitVector(padded.size());
    for (std::size_t b = 0; b < layout.block_count; ++b) {
        const BitVector block = padded.slice(b * code.n(), code.n());
        auto decoded = code.syndrome_decode(block);
        if (!decoded)
            throw EnrollmentError("make_binary_sketch: uncorrectable block " + std::to_string(b));
        detail::paste(result.codeword, *decoded, b * code.n());
        detail::paste(result.sketch.dv_bits, block ^ *decoded, b * code.n());
    }
    return result;
}

// Verification: XOR the stored offset, decode, XOR it back, strip padding.
// Recovers the enrolled template whenever each block of the probe is within
// Hamming distance t of it; an uncorrectable block reads as a reject.
inline std::optional<BitVector> recover_binary_center(const CodeLayout& layout,
                                                      const BinarySketch& sketch,
                                                      const BitVector& probe) {
    if (sketch.layout != layout)
        throw std::invalid_argument("recover_binary_center: layout mismatch");
    if (probe.size() != template_length(layout))
        throw std::invalid_argument("recover_binary_center: probe length mismatch");

    const LinearCode code = LinearCode::from_id(layout.code_id);
    const BitVector padded = probe.resized(coded_length(layout));

    BitVector recovered(padded.size());
    for (std::size_t b = 0; b < layout.block_count; ++b) {
        const BitVector shifted =
            padded.slice(b * code.n(), code.n()) ^ sketch.dv_bits.slice(b * code.n(), code.n());
        auto decoded = code.syndrome_decode(shifted);
        if (!decoded) return std::nullopt;
        detail::paste(recovered, *decoded ^ sketch.dv_bits.slice(b * code.n(), code.n()),
                      b * code.n());
    }
    return recovered.resized(template_length(layout));
}

inline std::vector<std::uint8_t> serialize_layout(const CodeLayout& layout) {
    std::vector<std::uint8_t> out;
    put_u16le(out, layout.code_id);
    put_u16le(out, layout.block_count);
    put_u16le(out, layout.pad_bits);
    return out;
}

inline CodeLayout deserialize_layout(const std::vector<std::uint8_t>& bytes) {
    ByteReader in(bytes);
    CodeLayout layout;
    layout.code_id = in.u16le();
    layout.block_count = in.u16le();
    layout.pad_bits = in.u16le();
    if (!in.at_end()) throw FormatError("code layout: trailing bytes");
    LinearCode::from_id(layout.code_id);  // validates the id
    if (layout.block_count == 0) throw FormatError("code layout: zero blocks");
    if (template_length(layout) == 0 || layout.pad_bits >= coded_length(layout))
        throw FormatError("code layout: pad bits exceed coded length");
    return layout;
}

}  // namespace nfe
