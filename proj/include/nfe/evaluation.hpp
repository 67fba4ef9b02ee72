#pragma once

// Evaluation harness: FRR/FAR sweep over radius multipliers plus the
// entropy-based security summary (sphere-packing upper bound, histogram
// lower bound).

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "nfe/embedding.hpp"
#include "nfe/entropy.hpp"
#include "nfe/expander.hpp"
#include "nfe/geometry.hpp"
#include "nfe/prng.hpp"
#include "nfe/record.hpp"

namespace nfe {

struct EvalPoint {
    double multiplier = 0.0;
    double frr = 0.0;
    double far = 0.0;
    std::size_t genuine_trials = 0;
    std::size_t genuine_rejects = 0;
    std::size_t impostor_trials = 0;
    std::size_t impostor_accepts = 0;
};

struct SecuritySummary {
    double entropy_upper_bits = 0.0;
    double entropy_lower_bits = 0.0;
    double support_radius = 0.0;
    double median_radius = 0.0;
};

struct EvalReport {
    Scheme scheme = Scheme::lattice;
    std::uint64_t seed = 0;
    std::vector<EvalPoint> points;   // grid order
    std::vector<double> user_radii;  // multiplier 1.0, train-data fit
    SecuritySummary security;
};

struct SweepConfig {
    double quantile = 0.95;
    double support_inflation = 0.10;
    std::uint16_t code_id = kCodeIdHamming7;
    std::vector<std::uint8_t> pepper;
};

namespace detail {

inline double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

inline Salt salt_from_rng(Xoshiro256& rng) {
    Salt salt{};
    for (std::size_t w = 0; w < 2; ++w) {
        const std::uint64_t bits = rng.next();
        for (std::size_t b = 0; b < 8; ++b)
            salt[w * 8 + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    return salt;
}

}  // namespace detail

// Security summary for a population: support sphere over all expander
// outputs, packing bound at the median user radius, and the histogram
// lower bound over the lattice that median radius induces (spacing 2r).
inline SecuritySummary security_report(const EmbeddingSet& all, const ExpanderParams& expander,
                                       const std::vector<double>& user_radii, double inflation) {
    if (all.items.empty()) throw std::invalid_argument("security_report: empty embedding set");
    if (user_radii.empty()) throw std::invalid_argument("security_report: no user radii");
    if (all.dim != expander.input_dim())
        throw std::invalid_argument("security_report: embedding dimension mismatch");

    std::vector<Vec> outputs;
    outputs.reserve(all.items.size());
    for (const auto& item : all.items) outputs.push_back(forward(expander, item.vector));

    SecuritySummary summary;
    const SupportSphere support = fit_support_sphere(outputs, inflation);
    summary.support_radius = support.radius;
    summary.median_radius = detail::median(user_radii);

    const auto packing =
        sphere_packing_entropy(expander.output_dim(), support.radius, summary.median_radius);
    summary.entropy_upper_bits = packing.bits;

    const std::int64_t spacing = std::max<std::int64_t>(1, to_fixed(2.0 * summary.median_radius));
    summary.entropy_lower_bits =
        histogram_entropy(outputs, LatticeCodebook::from_support(spacing, support));
    return summary;
}

// Enrolls every train user at each radius multiplier and measures FRR over
// genuine test probes and FAR over the exhaustive cross-user probe pool.
// All randomness (enrollment salts) derives from the seed.
inline EvalReport far_frr_sweep(const EmbeddingSet& train, const EmbeddingSet& test,
                                const ExpanderParams& expander,
                                const std::vector<double>& multipliers, Scheme scheme,
                                std::uint64_t seed, const SweepConfig& config = {}) {
    if (test.items.empty()) throw std::invalid_argument("far_frr_sweep: empty test set");
    if (train.items.empty()) throw std::invalid_argument("far_frr_sweep: empty train set");
    if (train.dim != expander.input_dim() || test.dim != expander.input_dim())
        throw std::invalid_argument("far_frr_sweep: embedding dimension mismatch");
    if (multipliers.empty()) throw std::invalid_argument("far_frr_sweep: no multipliers");
    for (double m : multipliers)
        if (!(m > 0.0)) throw std::invalid_argument("far_frr_sweep: multipliers must be positive");

    const auto train_users = train.by_user();
    {
        std::unordered_set<std::string> known;
        for (const auto& g : train_users) known.insert(g.first);
        for (const auto& item : test.items)
            if (!known.count(item.user_id))
                throw std::invalid_argument("far_frr_sweep: test user '" + item.user_id +
                                            "' missing from train set");
    }

    std::vector<Vec> train_outputs;
    train_outputs.reserve(train.items.size());
    for (const auto& item : train.items) train_outputs.push_back(forward(expander, item.vector));

    EvalReport report;
    report.scheme = scheme;
    report.seed = seed;

    const SupportSphere support = fit_support_sphere(train_outputs, config.support_inflation);
    std::vector<std::vector<Vec>> user_vectors(train_users.size());
    for (std::size_t u = 0; u < train_users.size(); ++u) {
        std::vector<Vec> outputs;
        for (auto idx : train_users[u].second) {
            user_vectors[u].push_back(train.items[idx].vector);
            outputs.push_back(train_outputs[idx]);
        }
        report.user_radii.push_back(fit_user_region(outputs, config.quantile).radius);
    }
    report.security = security_report(train, expander, report.user_radii,
                                      config.support_inflation);

    Xoshiro256 rng(seed);
    for (double multiplier : multipliers) {
        EnrollConfig enroll;
        enroll.scheme = scheme;
        enroll.quantile = config.quantile;
        enroll.radius_multiplier = multiplier;
        enroll.support = support;
        enroll.code_id = config.code_id;
        enroll.pepper = config.pepper;

        RecordStore store;
        for (std::size_t u = 0; u < train_users.size(); ++u) {
            enroll.fixed_salt = detail::salt_from_rng(rng);
            enroll_user(store, train_users[u].first, user_vectors[u], expander, enroll);
        }

        EvalPoint point;
        point.multiplier = multiplier;
        for (const auto& item : test.items) {
            for (const auto& record : store.records) {
                const bool genuine = record.username == item.user_id;
                const bool accepted = verify_user(record, item.vector, expander, config.pepper) ==
                                      VerifyResult::accept;
                if (genuine) {
                    point.genuine_trials += 1;
                    if (!accepted) point.genuine_rejects += 1;
                } else {
                    point.impostor_trials += 1;
                    if (accepted) point.impostor_accepts += 1;
                }
            }
        }
        point.frr = point.genuine_trials == 0
                        ? 0.0
                        : static_cast<double>(point.genuine_rejects) /
                              static_cast<double>(point.genuine_trials);
        point.far = point.impostor_trials == 0
                        ? 0.0
                        : static_cast<double>(point.impostor_accepts) /
                              static_cast<double>(point.impostor_trials);
        report.points.push_back(point);
    }
    return report;
}

}  // namespace nfe
