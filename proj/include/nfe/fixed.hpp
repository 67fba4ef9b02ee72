#pragma once

// Q43.20 fixed-point vectors. Every sketch-domain quantity lives on the
// 2^-20 grid so that sketch arithmetic is exact and the recovered center
// hashes identically on every platform.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "nfe/embedding.hpp"

namespace nfe {

inline constexpr int kFixedFracBits = 20;
inline constexpr std::int64_t kFixedOne = std::int64_t{1} << kFixedFracBits;
// Coordinates stay within +/-2^40 fixed units (|x| < 2^20 real), which keeps
// per-coordinate sums and products inside exact integer range.
inline constexpr std::int64_t kFixedMax = std::int64_t{1} << 40;

struct FixedVector {
    std::vector<std::int64_t> values;  // value = integer / 2^20

    std::size_t dim() const { return values.size(); }
    bool operator==(const FixedVector&) const = default;
};

// Nearest multiple of 2^-20, ties to the even integer multiple. Explicit
// tie handling rather than llrint, so the result does not depend on the
// floating-point environment's rounding mode.
inline std::int64_t to_fixed(double x) {
    if (!(std::fabs(x) < static_cast<double>(std::int64_t{1} << kFixedFracBits)) ||
        !std::isfinite(x))
        throw std::range_error("to_fixed: coordinate out of range");
    const double scaled = x * static_cast<double>(kFixedOne);  // exact: power-of-two multiply
    const double lo = std::floor(scaled);
    const double frac = scaled - lo;
    auto base = static_cast<std::int64_t>(lo);
    if (frac > 0.5) return base + 1;
    if (frac < 0.5) return base;
    return (base % 2 == 0) ? base : base + 1;
}

inline double to_double(std::int64_t v) {
    return static_cast<double>(v) * 0x1.0p-20;  // exact for |v| < 2^53
}

inline FixedVector quantize(const Vec& x) {
    FixedVector out;
    out.values.reserve(x.size());
    for (double v : x) out.values.push_back(to_fixed(v));
    return out;
}

inline Vec dequantize(const FixedVector& x) {
    Vec out;
    out.reserve(x.values.size());
    for (auto v : x.values) out.push_back(to_double(v));
    return out;
}

}  // namespace nfe
