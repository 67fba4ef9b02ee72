#pragma once

// Histogram-based lower bound on the secret's entropy: decode every
// embedding to its codeword and take the Shannon entropy of the resulting
// empirical distribution over codewords.

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "nfe/embedding.hpp"
#include "nfe/lattice.hpp"

namespace nfe {

inline double histogram_entropy(const std::vector<Vec>& points, const LatticeCodebook& codebook) {
    if (points.empty()) throw std::invalid_argument("histogram_entropy: no points");

    std::map<std::vector<std::int64_t>, std::size_t> counts;
    for (const auto& p : points) {
        if (p.size() != codebook.dim)
            throw std::invalid_argument("histogram_entropy: dimension mismatch");
        counts[decode_nearest(codebook, quantize(p)).values] += 1;
    }

    const double total = static_cast<double>(points.size());
    double bits = 0.0;
    for (const auto& [codeword, count] : counts) {
        const double p = static_cast<double>(count) / total;
        bits -= p * std::log2(p);
    }
    return bits <= 0.0 ? 0.0 : bits;
}

}  // namespace nfe
