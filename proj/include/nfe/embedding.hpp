#pragma once

// Labeled embedding vectors standing in for the output of a pre-existing
// classifier: synthetic Gaussian clusters for testing, plus a line-oriented
// text format for ingesting real embeddings.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nfe/errors.hpp"
#include "nfe/prng.hpp"

namespace nfe {

using Vec = std::vector<double>;

struct LabeledEmbedding {
    std::string user_id;
    Vec vector;

    bool operator==(const LabeledEmbedding&) const = default;
};

struct EmbeddingSet {
    std::vector<LabeledEmbedding> items;
    std::size_t dim = 0;

    bool operator==(const EmbeddingSet&) const = default;

    // Sample indices per user, in first-appearance order.
    std::vector<std::pair<std::string, std::vector<std::size_t>>> by_user() const {
        std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
        std::map<std::string, std::size_t> seen;
        for (std::size_t i = 0; i < items.size(); ++i) {
            auto [it, inserted] = seen.try_emplace(items[i].user_id, groups.size());
            if (inserted) groups.emplace_back(items[i].user_id, std::vector<std::size_t>{});
            groups[it->second].second.push_back(i);
        }
        return groups;
    }
};

inline double squared_distance(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("squared_distance: dimension mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

inline double distance(const Vec& a, const Vec& b) { return std::sqrt(squared_distance(a, b)); }

// num_users clusters of samples_per_user points each: a unit-norm center per
// user, samples = center + isotropic Gaussian noise of the given per-coordinate
// standard deviation. Pure function of its arguments.
inline EmbeddingSet generate_synthetic(std::size_t num_users, std::size_t samples_per_user,
                                       std::size_t dim, double intra_sigma, std::uint64_t seed) {
    if (num_users == 0 || samples_per_user == 0 || dim == 0)
        throw std::invalid_argument("generate_synthetic: counts and dim must be positive");
    if (!(intra_sigma > 0.0))
        throw std::invalid_argument("generate_synthetic: intra_sigma must be positive");

    Xoshiro256 rng(seed);
    EmbeddingSet set;
    set.dim = dim;
    set.items.reserve(num_users * samples_per_user);
    for (std::size_t u = 0; u < num_users; ++u) {
        Vec center(dim);
        double norm = 0.0;
        do {
            norm = 0.0;
            for (auto& c : center) {
                c = rng.gaussian();
                norm += c * c;
            }
        } while (norm == 0.0);
        norm = std::sqrt(norm);
        for (auto& c : center) c /= norm;

        const std::string user_id = "u" + std::to_string(u);
        for (std::size_t s = 0; s < samples_per_user; ++s) {
            Vec sample(dim);
            for (std::size_t i = 0; i < dim; ++i) sample[i] = center[i] + intra_sigma * rng.gaussian();
            set.items.push_back({user_id, std::move(sample)});
        }
    }
    return set;
}

namespace detail {

// Shortest decimal form that re-parses to the same binary64 value.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ParseError(line_no, "malformed value '" + std::string(text) + "'");
    if (!std::isfinite(value)) throw ParseError(line_no, "non-finite value");
    return value;
}

}  // namespace detail

// Text format, one record per line: `user_id,v1,...,vd`. First line is the
// header `#dim=<d>`; other lines starting with '#' are ignored.
inline void save_embedding_set(const EmbeddingSet& set, std::ostream& out) {
    out << "#dim=" << set.dim << "\n";
    for (const auto& item : set.items) {
        if (item.user_id.empty()) throw std::invalid_argument("save_embedding_set: empty user_id");
        if (item.user_id.find(',') != std::string::npos ||
            item.user_id.find('\n') != std::string::npos || item.user_id.front() == '#')
            throw std::invalid_argument("save_embedding_set: user_id not representable: " + item.user_id);
        out << item.user_id;
        for (double v : item.vector) out << ',' << detail::format_double(v);
        out << "\n";
    }
}

inline std::string save_embedding_set(const EmbeddingSet& set) {
    std::ostringstream out;
    save_embedding_set(set, out);
    return out.str();
}

inline EmbeddingSet load_embedding_set(std::istream& in) {
    EmbeddingSet set;
    std::string line;
    std::size_t line_no = 0;
    bool have_dim = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (!have_dim) {
                if (line.rfind("#dim=", 0) != 0)
                    throw ParseError(line_no, "expected '#dim=<d>' header");
                std::size_t dim = 0;
                const char* first = line.data() + 5;
                const char* last = line.data() + line.size();
                auto res = std::from_chars(first, last, dim);
                if (res.ec != std::errc{} || res.ptr != last || dim == 0)
                    throw ParseError(line_no, "invalid dimension header");
                set.dim = dim;
                have_dim = true;
            }
            continue;
        }
        if (!have_dim) throw ParseError(line_no, "record before '#dim=<d>' header");

        const auto first_comma = line.find(',');
        if (first_comma == std::string::npos || first_comma == 0)
            throw ParseError(line_no, "expected 'user_id,v1,...,vd'");
        LabeledEmbedding item;
        item.user_id = line.substr(0, first_comma);
        std::size_t pos = first_comma + 1;
        while (true) {
            auto next = line.find(',', pos);
            const auto end = (next == std::string::npos) ? line.size() : next;
            item.vector.push_back(detail::parse_double(
                std::string_view(line).substr(pos, end - pos), line_no));
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (item.vector.size() != set.dim)
            throw ParseError(line_no, "expected " + std::to_string(set.dim) + " values, got " +
                                          std::to_string(item.vector.size()));
        set.items.push_back(std::move(item));
    }
    if (set.items.empty()) throw FormatError("no records");
    return set;
}

inline EmbeddingSet load_embedding_set(const std::string& text) {
    std::istringstream in(text);
    return load_embedding_set(in);
}

// Per-user stratified split. Each user keeps clamp(floor(n*f), 1, n-1)
// samples in the train half, so both halves see every user.
inline std::pair<EmbeddingSet, EmbeddingSet> split(const EmbeddingSet& set, double train_fraction,
                                                   std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("split: train_fraction must be in (0,1)");

    Xoshiro256 rng(seed);
    EmbeddingSet train, test;
    train.dim = test.dim = set.dim;
    for (auto& [user, indices] : set.by_user()) {
        if (indices.size() < 2)
            throw std::invalid_argument("split: user '" + user + "' has fewer than 2 samples");
        const auto n = indices.size();
        auto n_train = static_cast<std::size_t>(
            std::floor(static_cast<double>(n) * train_fraction));
        n_train = std::clamp<std::size_t>(n_train, 1, n - 1);

        auto shuffled = indices;
        rng.shuffle(shuffled);
        std::sort(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
        std::sort(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());
        for (std::size_t i = 0; i < n; ++i)
            (i < n_train ? train : test).items.push_back(set.items[shuffled[i]]);
    }
    return {std::move(train), std::move(test)};
}

}  // namespace nfe
