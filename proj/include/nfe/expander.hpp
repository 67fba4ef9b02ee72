#pragma once

// The expander: a small fully-connected network trained with the triplet
// loss to reshape classifier embeddings into near-spherical per-user
// clusters. Hidden layers are affine+ReLU; the output layer is affine
// followed by L2 normalization, so outputs live on the unit sphere.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nfe/binary_io.hpp"
#include "nfe/embedding.hpp"
#include "nfe/errors.hpp"
#include "nfe/prng.hpp"

namespace nfe {

struct ExpanderParams {
    std::vector<std::size_t> layer_dims;        // input dim first, output dim last
    std::vector<std::vector<double>> weights;   // per affine layer, row-major (out x in)
    std::vector<std::vector<double>> biases;    // per affine layer

    std::size_t input_dim() const { return layer_dims.front(); }
    std::size_t output_dim() const { return layer_dims.back(); }
    std::size_t num_layers() const { return layer_dims.size() - 1; }

    bool operator==(const ExpanderParams&) const = default;
};

struct Triplet {
    std::size_t anchor = 0;
    std::size_t positive = 0;
    std::size_t negative = 0;
};

struct TrainConfig {
    double alpha = 0.2;
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::size_t epochs = 1;
    std::size_t batch_size = 32;
    double hard_fraction = 0.5;
    std::uint64_t seed = 0;
};

// Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
inline ExpanderParams init_params(const std::vector<std::size_t>& layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2)
        throw std::invalid_argument("init_params: need at least input and output dims");
    for (auto d : layer_dims)
        if (d == 0) throw std::invalid_argument("init_params: layer dims must be positive");

    Xoshiro256 rng(seed);
    ExpanderParams params;
    params.layer_dims = layer_dims;
    for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
        const std::size_t fan_in = layer_dims[l];
        const std::size_t fan_out = layer_dims[l + 1];
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::vector<double> w(fan_out * fan_in);
        for (auto& v : w) v = (2.0 * rng.uniform01() - 1.0) * bound;
        params.weights.push_back(std::move(w));
        params.biases.emplace_back(fan_out, 0.0);
    }
    return params;
}

namespace detail {

// Per-layer post-activation values plus the pre-normalization output,
// retained for backpropagation.
struct ForwardTrace {
    std::vector<Vec> activations;  // activations[l] = input to affine layer l
    Vec pre_norm;                  // output-layer affine result
    Vec output;                    // pre_norm / ||pre_norm|| (or e1 if degenerate)
    double norm = 0.0;
    bool degenerate = false;
};

inline void affine(const std::vector<double>& w, const std::vector<double>& b,
                   const Vec& in, Vec& out) {
    const std::size_t rows = b.size();
    const std::size_t cols = in.size();
    out.assign(rows, 0.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = b[r];
        const double* row = w.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * in[c];
        out[r] = acc;
    }
}

inline ForwardTrace forward_trace(const ExpanderParams& params, const Vec& x) {
    if (x.size() != params.input_dim())
        throw std::invalid_argument("forward: input dimension mismatch");

    ForwardTrace trace;
    trace.activations.reserve(params.num_layers());
    trace.activations.push_back(x);
    Vec z;
    for (std::size_t l = 0; l + 1 < params.num_layers(); ++l) {
        affine(params.weights[l], params.biases[l], trace.activations.back(), z);
        for (auto& v : z) v = std::max(0.0, v);
        trace.activations.push_back(z);
    }
    affine(params.weights.back(), params.biases.back(), trace.activations.back(), trace.pre_norm);

    double sq = 0.0;
    for (double v : trace.pre_norm) sq += v * v;
    trace.norm = std::sqrt(sq);
    if (trace.norm == 0.0) {
        trace.degenerate = true;
        trace.output.assign(params.output_dim(), 0.0);
        trace.output[0] = 1.0;
    } else {
        trace.output = trace.pre_norm;
        for (auto& v : trace.output) v /= trace.norm;
    }
    return trace;
}

}  // namespace detail

// Maps an embedding through the network; the result has unit L2 norm. A
// zero vector before normalization yields the first basis vector and, when
// the caller provides the flag, a degenerate-output warning.
inline Vec forward(const ExpanderParams& params, const Vec& x, bool* degenerate = nullptr) {
    auto trace = detail::forward_trace(params, x);
    if (degenerate) *degenerate = trace.degenerate;
    return std::move(trace.output);
}

// max(0, ||fa-fp||^2 - ||fa-fn||^2 + alpha)
inline double triplet_loss(const Vec& fa, const Vec& fp, const Vec& fn_, double alpha) {
    if (fa.size() != fp.size() || fa.size() != fn_.size())
        throw std::invalid_argument("triplet_loss: dimension mismatch");
    return std::max(0.0, squared_distance(fa, fp) - squared_distance(fa, fn_) + alpha);
}

struct BatchGradient {
    ExpanderParams grad;  // same shapes as the parameters
    double mean_loss = 0.0;
};

namespace detail {

inline ExpanderParams zeros_like(const ExpanderParams& params) {
    ExpanderParams z;
    z.layer_dims = params.layer_dims;
    for (const auto& w : params.weights) z.weights.emplace_back(w.size(), 0.0);
    for (const auto& b : params.biases) z.biases.emplace_back(b.size(), 0.0);
    return z;
}

// Accumulates the gradient of the loss w.r.t. one forward pass into `grad`.
// `g_out` is dL/d(output). Hinge and ReLU subgradients at their kinks are
// zero; a degenerate normalization contributes nothing.
inline void backprop(const ExpanderParams& params, const ForwardTrace& trace, const Vec& g_out,
                     ExpanderParams& grad) {
    if (trace.degenerate) return;

    // Through y = z / ||z||:  dz = (g - (g.y) y) / ||z||
    const std::size_t out_dim = trace.output.size();
    double dot = 0.0;
    for (std::size_t i = 0; i < out_dim; ++i) dot += g_out[i] * trace.output[i];
    Vec delta(out_dim);
    for (std::size_t i = 0; i < out_dim; ++i)
        delta[i] = (g_out[i] - dot * trace.output[i]) / trace.norm;

    for (std::size_t l = params.num_layers(); l-- > 0;) {
        const Vec& input = trace.activations[l];
        const std::size_t rows = delta.size();
        const std::size_t cols = input.size();
        auto& gw = grad.weights[l];
        auto& gb = grad.biases[l];
        for (std::size_t r = 0; r < rows; ++r) {
            gb[r] += delta[r];
            double* grow = gw.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) grow[c] += delta[r] * input[c];
        }
        if (l == 0) break;

        Vec prev(cols, 0.0);
        const auto& w = params.weights[l];
        for (std::size_t r = 0; r < rows; ++r) {
            const double* row = w.data() + r * cols;
            for (std::size_t c = 0; c < cols; ++c) prev[c] += row[c] * delta[r];
        }
        // ReLU mask: post-activation > 0 iff pre-activation > 0
        for (std::size_t c = 0; c < cols; ++c)
            if (trace.activations[l][c] <= 0.0) prev[c] = 0.0;
        delta = std::move(prev);
    }
}

}  // namespace detail

// Gradient of the mean triplet loss over the batch, with the loss itself.
inline BatchGradient batch_gradient(const ExpanderParams& params, const EmbeddingSet& set,
                                    const std::vector<Triplet>& triplets, double alpha) {
    if (triplets.empty()) throw std::invalid_argument("batch_gradient: empty triplet batch");
    if (set.dim != params.input_dim())
        throw std::invalid_argument("batch_gradient: set dimension mismatch");

    BatchGradient result;
    result.grad = detail::zeros_like(params);

    // Forward passes are shared across triplets referencing the same item.
    std::vector<detail::ForwardTrace> traces(set.items.size());
    std::vector<bool> computed(set.items.size(), false);
    auto trace_of = [&](std::size_t idx) -> const detail::ForwardTrace& {
        if (idx >= set.items.size())
            throw std::invalid_argument("batch_gradient: triplet index out of range");
        if (!computed[idx]) {
            traces[idx] = detail::forward_trace(params, set.items[idx].vector);
            computed[idx] = true;
        }
        return traces[idx];
    };

    double loss_sum = 0.0;
    const std::size_t out_dim = params.output_dim();
    for (const auto& t : triplets) {
        const auto& ta = trace_of(t.anchor);
        const auto& tp = trace_of(t.positive);
        const auto& tn = trace_of(t.negative);
        const double v =
            squared_distance(ta.output, tp.output) - squared_distance(ta.output, tn.output) + alpha;
        if (v <= 0.0) continue;  // hinge inactive (subgradient zero at the kink)
        loss_sum += v;

        Vec ga(out_dim), gp(out_dim), gn(out_dim);
        for (std::size_t i = 0; i < out_dim; ++i) {
            ga[i] = 2.0 * (tn.output[i] - tp.output[i]);
            gp[i] = 2.0 * (tp.output[i] - ta.output[i]);
            gn[i] = 2.0 * (ta.output[i] - tn.output[i]);
        }
        detail::backprop(params, ta, ga, result.grad);
        detail::backprop(params, tp, gp, result.grad);
        detail::backprop(params, tn, gn, result.grad);
    }

    const double inv = 1.0 / static_cast<double>(triplets.size());
    for (auto& w : result.grad.weights)
        for (auto& v : w) v *= inv;
    for (auto& b : result.grad.biases)
        for (auto& v : b) v *= inv;
    result.mean_loss = loss_sum * inv;
    return result;
}

struct MiningResult {
    std::vector<Triplet> triplets;  // the first hard_count entries are hard
    std::size_t hard_count = 0;
    std::size_t hard_shortfall = 0;  // requested hard triplets that do not exist
};

// Mines round(count*hard_fraction) hard triplets (the negative violates the
// margin under the current parameters) and fills the remainder with
// uniformly random valid triplets. If fewer hard triplets exist than
// requested, easy ones fill the gap and the shortfall is reported.
inline MiningResult mine_triplets(const ExpanderParams& params, const EmbeddingSet& set,
                                  std::size_t count, double hard_fraction, double alpha,
                                  std::uint64_t seed) {
    if (count == 0) throw std::invalid_argument("mine_triplets: count must be positive");
    if (!(hard_fraction >= 0.0 && hard_fraction <= 1.0))
        throw std::invalid_argument("mine_triplets: hard_fraction must be in [0,1]");
    const auto groups = set.by_user();
    if (groups.size() < 2) throw std::invalid_argument("mine_triplets: need at least 2 users");

    const std::size_t n = set.items.size();
    std::vector<std::size_t> user_of(n);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (auto idx : groups[g].second) user_of[idx] = g;

    std::vector<Vec> outputs(n);
    for (std::size_t i = 0; i < n; ++i) outputs[i] = forward(params, set.items[i].vector);
    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d2[i * n + j] = d2[j * n + i] = squared_distance(outputs[i], outputs[j]);

    // Anchors come from users with >= 2 samples; negatives from any other user.
    std::vector<Triplet> hard;
    std::uint64_t total_valid = 0;
    std::vector<std::uint64_t> anchor_weight(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
        const auto& same = groups[user_of[a]].second;
        if (same.size() < 2) continue;
        anchor_weight[a] = static_cast<std::uint64_t>(same.size() - 1) *
                           static_cast<std::uint64_t>(n - same.size());
        total_valid += anchor_weight[a];
        for (auto p : same) {
            if (p == a) continue;
            for (std::size_t neg = 0; neg < n; ++neg) {
                if (user_of[neg] == user_of[a]) continue;
                if (d2[a * n + neg] < d2[a * n + p] + alpha) hard.push_back({a, p, neg});
            }
        }
    }
    if (total_valid == 0) throw std::invalid_argument("mine_triplets: no valid triplets");

    Xoshiro256 rng(seed);
    const auto hard_requested =
        static_cast<std::size_t>(std::llround(static_cast<double>(count) * hard_fraction));
    MiningResult result;
    result.hard_count = std::min(hard_requested, hard.size());
    result.hard_shortfall = hard_requested - result.hard_count;

    rng.shuffle(hard);
    result.triplets.assign(hard.begin(), hard.begin() + static_cast<std::ptrdiff_t>(result.hard_count));

    // Uniform over the set of all valid triplets, sampled with replacement.
    for (std::size_t e = result.hard_count; e < count; ++e) {
        std::uint64_t r = rng.uniform_below(total_valid);
        std::size_t a = 0;
        while (r >= anchor_weight[a]) r -= anchor_weight[a++];
        const auto& same = groups[user_of[a]].second;
        const std::uint64_t others = static_cast<std::uint64_t>(n - same.size());
        std::uint64_t p_pick = r / others;
        const std::uint64_t n_pick = r % others;

        std::size_t positive = same.size();
        for (auto idx : same) {
            if (idx == a) continue;
            if (p_pick-- == 0) { positive = idx; break; }
        }
        std::size_t negative = n;
        std::uint64_t skip = n_pick;
        for (std::size_t idx = 0; idx < n; ++idx) {
            if (user_of[idx] == user_of[a]) continue;
            if (skip-- == 0) { negative = idx; break; }
        }
        result.triplets.push_back({a, positive, negative});
    }
    return result;
}

struct TrainResult {
    ExpanderParams params;
    std::vector<double> epoch_loss;  // mean triplet loss per epoch
    std::size_t degenerate_outputs = 0;
};

// Mini-batch SGD with momentum. Each epoch mines a fresh triplet set
// (one full batch per ceil(items/batch_size)); deterministic given the seed.
inline TrainResult train(const ExpanderParams& initial, const EmbeddingSet& set,
                         const TrainConfig& config) {
    if (!(config.alpha > 0.0)) throw std::invalid_argument("train: alpha must be positive");
    if (config.learning_rate < 0.0) throw std::invalid_argument("train: negative learning rate");
    if (!(config.momentum >= 0.0 && config.momentum < 1.0))
        throw std::invalid_argument("train: momentum must be in [0,1)");
    if (config.epochs == 0 || config.batch_size == 0)
        throw std::invalid_argument("train: epochs and batch_size must be positive");
    if (set.dim != initial.input_dim()) throw std::invalid_argument("train: set dimension mismatch");

    Xoshiro256 rng(config.seed);
    TrainResult result;
    result.params = initial;
    auto velocity = detail::zeros_like(initial);

    const std::size_t n_batches =
        std::max<std::size_t>(1, (set.items.size() + config.batch_size - 1) / config.batch_size);
    const std::size_t per_epoch = n_batches * config.batch_size;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        auto mined = mine_triplets(result.params, set, per_epoch, config.hard_fraction,
                                   config.alpha, rng.next());
        rng.shuffle(mined.triplets);

        double loss_acc = 0.0;
        for (std::size_t b = 0; b < n_batches; ++b) {
            const auto begin = mined.triplets.begin() + static_cast<std::ptrdiff_t>(b * config.batch_size);
            std::vector<Triplet> batch(begin, begin + static_cast<std::ptrdiff_t>(config.batch_size));
            auto bg = batch_gradient(result.params, set, batch, config.alpha);
            loss_acc += bg.mean_loss;

            for (std::size_t l = 0; l < result.params.num_layers(); ++l) {
                auto& w = result.params.weights[l];
                auto& b_ = result.params.biases[l];
                for (std::size_t i = 0; i < w.size(); ++i) {
                    velocity.weights[l][i] = config.momentum * velocity.weights[l][i] -
                                             config.learning_rate * bg.grad.weights[l][i];
                    w[i] += velocity.weights[l][i];
                }
                for (std::size_t i = 0; i < b_.size(); ++i) {
                    velocity.biases[l][i] = config.momentum * velocity.biases[l][i] -
                                            config.learning_rate * bg.grad.biases[l][i];
                    b_[i] += velocity.biases[l][i];
                }
            }
        }
        result.epoch_loss.push_back(loss_acc / static_cast<double>(n_batches));
    }
    return result;
}

// Binary parameter format: magic NFEX1, layer-dim count (u32 LE), dims
// (u32 LE), then per layer row-major weights and biases as binary64 LE.
inline std::vector<std::uint8_t> save_expander_params(const ExpanderParams& params) {
    std::vector<std::uint8_t> out;
    put_bytes(out, "NFEX1", 5);
    put_u32le(out, static_cast<std::uint32_t>(params.layer_dims.size()));
    for (auto d : params.layer_dims) put_u32le(out, static_cast<std::uint32_t>(d));
    for (std::size_t l = 0; l < params.num_layers(); ++l) {
        for (double v : params.weights[l]) put_f64le(out, v);
        for (double v : params.biases[l]) put_f64le(out, v);
    }
    return out;
}

inline ExpanderParams load_expander_params(const std::vector<std::uint8_t>& bytes) {
    ByteReader in(bytes);
    in.expect_magic("NFEX1", 5, "expander params");
    const std::uint32_t n_dims = in.u32le();
    if (n_dims < 2) throw FormatError("expander params: need at least 2 layer dims");

    ExpanderParams params;
    for (std::uint32_t i = 0; i < n_dims; ++i) {
        const std::uint32_t d = in.u32le();
        if (d == 0) throw FormatError("expander params: zero layer dim");
        params.layer_dims.push_back(d);
    }
    for (std::size_t l = 0; l + 1 < params.layer_dims.size(); ++l) {
        const std::size_t rows = params.layer_dims[l + 1];
        const std::size_t cols = params.layer_dims[l];
        std::vector<double> w(rows * cols);
        for (auto& v : w) {
            v = in.f64le();
            if (!std::isfinite(v)) throw FormatError("expander params: non-finite weight");
        }
        std::vector<double> b(rows);
        for (auto& v : b) {
            v = in.f64le();
            if (!std::isfinite(v)) throw FormatError("expander params: non-finite bias");
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(std::move(b));
    }
    if (!in.at_end()) throw FormatError("expander params: trailing bytes");
    return params;
}

}  // namespace nfe
