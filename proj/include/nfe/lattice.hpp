#pragma once

// Real-valued secure sketch over a scaled cubic lattice: codewords are
// s * Z^dim restricted to the support sphere, decoding is per-coordinate
// nearest-multiple rounding, and sketches are exact fixed-point difference
// vectors. Setting s = 2r makes the inscribed sphere of each Voronoi cube
// match a radius-r decision region: any error with max-norm (hence any with
// Euclidean norm) below s/2 is corrected exactly.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nfe/binary_io.hpp"
#include "nfe/errors.hpp"
#include "nfe/fixed.hpp"
#include "nfe/geometry.hpp"

namespace nfe {

struct LatticeCodebook {
    std::size_t dim = 0;
    std::int64_t spacing = 0;      // fixed-point, > 0
    FixedVector support_center;    // fixed-point support sphere
    std::int64_t support_radius = 0;

    LatticeCodebook() = default;
    LatticeCodebook(std::size_t dim_, std::int64_t spacing_, FixedVector support_center_,
                    std::int64_t support_radius_)
        : dim(dim_), spacing(spacing_), support_center(std::move(support_center_)),
          support_radius(support_radius_) {
        if (dim == 0) throw std::invalid_argument("LatticeCodebook: dim must be positive");
        if (spacing <= 0) throw std::invalid_argument("LatticeCodebook: spacing must be positive");
        if (support_center.dim() != dim)
            throw std::invalid_argument("LatticeCodebook: support center dimension mismatch");
        if (support_radius <= 0)
            throw std::invalid_argument("LatticeCodebook: support radius must be positive");
    }

    // Snaps the real-valued sphere onto the fixed-point grid.
    static LatticeCodebook from_support(std::int64_t spacing, const SupportSphere& support) {
        return LatticeCodebook(support.center.size(), spacing, quantize(support.center),
                               std::max<std::int64_t>(1, to_fixed(support.radius)));
    }

    bool operator==(const LatticeCodebook&) const = default;
};

struct LatticeSketch {
    FixedVector dv;  // center - nearest codeword, exact

    std::size_t dim() const { return dv.dim(); }
    bool operator==(const LatticeSketch&) const = default;
};

namespace detail {

// Round num/den (den > 0) to the nearest integer, ties to even.
inline std::int64_t round_div_even(std::int64_t num, std::int64_t den) {
    std::int64_t q = num / den;
    std::int64_t r = num % den;
    if (r < 0) {
        q -= 1;
        r += den;
    }
    const std::int64_t twice = 2 * r;
    if (twice > den) return q + 1;
    if (twice < den) return q;
    return (q % 2 == 0) ? q : q + 1;
}

// Saturating int64 ops in 128-bit arithmetic. Legitimate sketch values stay
// far inside the guard range; only corrupted records can reach saturation,
// and a saturated coordinate can never equal an enrolled center, so the
// digest comparison rejects as it should.
inline constexpr std::int64_t kSatLimit = std::int64_t{1} << 62;

inline std::int64_t sat(__int128 v) {
    if (v > kSatLimit) return kSatLimit;
    if (v < -kSatLimit) return -kSatLimit;
    return static_cast<std::int64_t>(v);
}

inline std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    return sat(static_cast<__int128>(a) + b);
}

inline std::int64_t sat_sub(std::int64_t a, std::int64_t b) {
    return sat(static_cast<__int128>(a) - b);
}

inline std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
    return sat(static_cast<__int128>(a) * b);
}

}  // namespace detail

// Euclidean-nearest lattice point; per coordinate the nearest multiple of
// the spacing, ties to the even multiple.
inline FixedVector decode_nearest(const LatticeCodebook& codebook, const FixedVector& point) {
    if (point.dim() != codebook.dim)
        throw std::invalid_argument("decode_nearest: dimension mismatch");
    FixedVector codeword;
    codeword.values.reserve(point.dim());
    for (auto v : point.values)
        codeword.values.push_back(
            detail::sat_mul(detail::round_div_even(v, codebook.spacing), codebook.spacing));
    return codeword;
}

struct SketchResult {
    LatticeSketch sketch;
    FixedVector codeword;
};

// Registration: decode the region center to the closest codeword and store
// the exact difference. center == codeword + dv holds bit-for-bit.
inline SketchResult make_sketch(const LatticeCodebook& codebook, const FixedVector& center) {
    if (center.dim() != codebook.dim)
        throw std::invalid_argument("make_sketch: dimension mismatch");

    __int128 dist2 = 0;
    for (std::size_t i = 0; i < center.dim(); ++i) {
        const __int128 d = static_cast<__int128>(center.values[i]) - codebook.support_center.values[i];
        dist2 += d * d;
    }
    const __int128 r2 =
        static_cast<__int128>(codebook.support_radius) * codebook.support_radius;
    if (dist2 > r2) throw OutOfSupportError("make_sketch: center outside support sphere");

    SketchResult result;
    result.codeword = decode_nearest(codebook, center);
    result.sketch.dv.values.reserve(center.dim());
    for (std::size_t i = 0; i < center.dim(); ++i)
        result.sketch.dv.values.push_back(center.values[i] - result.codeword.values[i]);
    return result;
}

// Verification: subtract the stored difference vector, decode, add it back.
// Lands exactly on the enrolled center whenever the probe is within the
// codeword's Voronoi cube of the center.
inline FixedVector recover_center(const LatticeCodebook& codebook, const LatticeSketch& sketch,
                                  const FixedVector& probe) {
    if (probe.dim() != codebook.dim || sketch.dim() != codebook.dim)
        throw std::invalid_argument("recover_center: dimension mismatch");

    FixedVector shifted;
    shifted.values.reserve(probe.dim());
    for (std::size_t i = 0; i < probe.dim(); ++i)
        shifted.values.push_back(detail::sat_sub(probe.values[i], sketch.dv.values[i]));
    FixedVector codeword = decode_nearest(codebook, shifted);
    for (std::size_t i = 0; i < codeword.values.size(); ++i)
        codeword.values[i] = detail::sat_add(codeword.values[i], sketch.dv.values[i]);
    return codeword;
}

// Codebook parameters as stored in an authentication record.
inline std::vector<std::uint8_t> serialize_codebook(const LatticeCodebook& codebook) {
    std::vector<std::uint8_t> out;
    put_u32le(out, static_cast<std::uint32_t>(codebook.dim));
    put_i64le(out, codebook.spacing);
    for (auto v : codebook.support_center.values) put_i64le(out, v);
    put_i64le(out, codebook.support_radius);
    return out;
}

inline LatticeCodebook deserialize_codebook(const std::vector<std::uint8_t>& bytes) {
    ByteReader in(bytes);
    const std::uint32_t dim = in.u32le();
    if (dim == 0) throw FormatError("codebook: zero dimension");
    const std::int64_t spacing = in.i64le();
    if (spacing <= 0) throw FormatError("codebook: non-positive spacing");
    FixedVector center;
    for (std::uint32_t i = 0; i < dim; ++i) center.values.push_back(in.i64le());
    const std::int64_t radius = in.i64le();
    if (radius <= 0) throw FormatError("codebook: non-positive support radius");
    if (!in.at_end()) throw FormatError("codebook: trailing bytes");
    return LatticeCodebook(dim, spacing, std::move(center), radius);
}

}  // namespace nfe
