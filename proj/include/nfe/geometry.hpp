#pragma once

// Per-user decision regions, the global support sphere, and the
// sphere-packing entropy bound derived from their radii.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfe/embedding.hpp"

namespace nfe {

// Radii never collapse to zero: a degenerate single-point user still gets a
// positive radius so the induced lattice spacing stays positive.
inline constexpr double kRadiusFloor = 1e-9;

struct DecisionRegion {
    std::string user_id;
    Vec center;
    double radius = 0.0;
};

struct SupportSphere {
    Vec center;
    double radius = 0.0;
};

namespace detail {

inline Vec coordinate_mean(const std::vector<Vec>& points) {
    const std::size_t dim = points.front().size();
    Vec mean(dim, 0.0);
    for (const auto& p : points) {
        if (p.size() != dim) throw std::invalid_argument("points have inconsistent dimensions");
        for (std::size_t i = 0; i < dim; ++i) mean[i] += p[i];
    }
    for (auto& m : mean) m /= static_cast<double>(points.size());
    return mean;
}

// Empirical quantile as the smallest value covering at least fraction q of
// the sorted sample: index ceil(q*n) - 1.
inline std::size_t quantile_index(std::size_t n, double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    return std::min(n - 1, idx == 0 ? 0 : idx - 1);
}

}  // namespace detail

// Center = coordinate-wise mean, radius = empirical quantile of distances to
// the center (quantile 1.0 = max distance).
inline DecisionRegion fit_user_region(const std::vector<Vec>& points, double quantile,
                                      std::string user_id = {}) {
    if (points.empty()) throw std::invalid_argument("fit_user_region: no points");
    if (!(quantile > 0.0 && quantile <= 1.0))
        throw std::invalid_argument("fit_user_region: quantile must be in (0,1]");

    DecisionRegion region;
    region.user_id = std::move(user_id);
    region.center = detail::coordinate_mean(points);

    std::vector<double> dists(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        dists[i] = distance(points[i], region.center);
    const std::size_t k = detail::quantile_index(dists.size(), quantile);
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k), dists.end());
    region.radius = std::max(dists[k], kRadiusFloor);
    return region;
}

// Global mean center; base radius = max distance over all points, inflated
// by the given fraction (0.1 reproduces the 10%-larger-sphere rule).
inline SupportSphere fit_support_sphere(const std::vector<Vec>& points, double inflation) {
    if (points.empty()) throw std::invalid_argument("fit_support_sphere: no points");
    if (inflation < 0.0) throw std::invalid_argument("fit_support_sphere: inflation must be >= 0");

    SupportSphere sphere;
    sphere.center = detail::coordinate_mean(points);
    double base = 0.0;
    for (const auto& p : points) base = std::max(base, distance(p, sphere.center));
    sphere.radius = std::max(base, kRadiusFloor) * (1.0 + inflation);
    return sphere;
}

struct PackingBound {
    double bits = 0.0;   // dim * log2(R / r)
    double count = 0.0;  // (R / r)^dim
};

// Upper bound on the secret's entropy: the log of how many radius-r decoding
// regions fit in the radius-R support by volume ratio.
inline PackingBound sphere_packing_entropy(std::size_t dim, double support_radius,
                                           double region_radius) {
    if (dim == 0) throw std::invalid_argument("sphere_packing_entropy: dim must be positive");
    if (!(region_radius > 0.0))
        throw std::invalid_argument("sphere_packing_entropy: region radius must be positive");
    if (support_radius < region_radius)
        throw std::invalid_argument("sphere_packing_entropy: support radius smaller than region radius");

    PackingBound bound;
    bound.bits = static_cast<double>(dim) * std::log2(support_radius / region_radius);
    bound.count = std::exp2(bound.bits);
    return bound;
}

}  // namespace nfe
