#pragma once

// Training utilities on top of the autodiff graph: AdamW, a cosine schedule
// with warm restarts, deterministic parameter init, and a small skip-gram
// word2vec trainer used to pre-train ranking embeddings.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "votelab/autodiff.hpp"
#include "votelab/sampling.hpp"

namespace votelab::nn {

struct AdamWConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

class AdamW {
public:
    using Config = AdamWConfig;

    explicit AdamW(std::vector<NodePtr> params, Config cfg = Config())
        : params_(std::move(params)), cfg_(cfg) {
        for (const NodePtr& p : params_) {
            m_.emplace_back(p->val.size(), 0.0);
            v_.emplace_back(p->val.size(), 0.0);
        }
    }

    double lr() const { return cfg_.lr; }
    void set_lr(double lr) { cfg_.lr = lr; }
    int64_t steps() const { return t_; }

    // Adopt another optimizer's moments and step count (the parameter lists
    // must have identical shapes). Used when training forks into branches.
    void copy_state_from(const AdamW& other) {
        if (other.m_.size() != m_.size()) throw std::invalid_argument("optimizer shape mismatch");
        for (size_t k = 0; k < m_.size(); ++k)
            if (other.m_[k].size() != m_[k].size())
                throw std::invalid_argument("optimizer shape mismatch");
        m_ = other.m_;
        v_ = other.v_;
        t_ = other.t_;
    }

    void zero_grad() { nn::zero_grad(params_); }

    // Decoupled weight decay: decay is applied to the parameter directly and
    // never enters the moment estimates, so exact zeros stay exact zeros.
    void step() {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg_.beta1, double(t_));
        const double bc2 = 1.0 - std::pow(cfg_.beta2, double(t_));
        for (size_t k = 0; k < params_.size(); ++k) {
            Node& p = *params_[k];
            auto& m = m_[k];
            auto& v = v_[k];
            for (int64_t i = 0; i < p.val.size(); ++i) {
                const double g = p.grad[i];
                m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
                v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                p.val[i] -= cfg_.lr * cfg_.weight_decay * p.val[i];
                p.val[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            }
        }
    }

private:
    std::vector<NodePtr> params_;
    Config cfg_;
    int64_t t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

// SGDR-style schedule: cosine decay from base_lr to eta_min over a cycle,
// restarting at full rate with each cycle Tmult times longer than the last.
inline double cosine_warm_restart_lr(int64_t step, double base_lr, int64_t t0 = 1000,
                                     int64_t t_mult = 2, double eta_min = 0.0) {
    if (step < 0 || t0 < 1 || t_mult < 1) throw std::invalid_argument("cosine_warm_restart_lr");
    int64_t ti = t0, start = 0;
    while (step >= start + ti) {
        start += ti;
        ti *= t_mult;
    }
    const double frac = double(step - start) / double(ti);
    return eta_min + (base_lr - eta_min) * 0.5 * (1.0 + std::cos(std::numbers::pi * frac));
}

inline void init_uniform(Tensor& t, Rng& rng, double lo, double hi) {
    for (int64_t i = 0; i < t.size(); ++i) t[i] = lo + (hi - lo) * rng.uniform01();
}

// U(-1/sqrt(fan_in), 1/sqrt(fan_in)) for both weight and bias.
inline void init_fan_in(Tensor& w, Tensor& b, int fan_in, Rng& rng) {
    const double bound = 1.0 / std::sqrt(double(fan_in));
    init_uniform(w, rng, -bound, bound);
    init_uniform(b, rng, -bound, bound);
}

// --- word2vec ---------------------------------------------------------------
//
// Skip-gram with negative sampling over integer token sentences. Follows the
// classic recipe: per-position window size drawn uniformly from 1..window,
// negatives drawn from the unigram distribution raised to 0.75, learning rate
// decayed linearly to 1e-4 of its start value. Returns the input vectors,
// row-major [vocab_size x dim].

struct Word2VecConfig {
    int dim = 100;
    int window = 5;
    int negatives = 5;
    double lr = 0.025;
    int epochs = 5;
};

inline std::vector<double> train_word2vec(const std::vector<std::vector<int>>& sentences,
                                          int vocab_size, const Word2VecConfig& cfg, Rng& rng) {
    if (vocab_size < 1 || cfg.dim < 1) throw std::invalid_argument("train_word2vec");
    const int D = cfg.dim;
    std::vector<double> in(size_t(vocab_size) * D);
    std::vector<double> out(size_t(vocab_size) * D, 0.0);
    for (double& x : in) x = (rng.uniform01() - 0.5) / double(D);

    // cumulative table for unigram^0.75 negative sampling
    std::vector<int64_t> count(vocab_size, 0);
    int64_t total_tokens = 0;
    for (const auto& s : sentences)
        for (int w : s) {
            if (w < 0 || w >= vocab_size) throw std::invalid_argument("token out of range");
            ++count[w];
            ++total_tokens;
        }
    if (total_tokens == 0) throw std::invalid_argument("empty corpus");
    std::vector<double> cdf(vocab_size);
    double acc = 0;
    for (int w = 0; w < vocab_size; ++w) {
        if (count[w] > 0) acc += std::pow(double(count[w]), 0.75);
        cdf[w] = acc;
    }
    auto draw_negative = [&]() {
        const double u = rng.uniform01() * acc;
        return int(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    };

    const int64_t schedule_total = int64_t(cfg.epochs) * total_tokens;
    int64_t processed = 0;
    std::vector<double> neu1e(D);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const auto& sen : sentences) {
            const int len = static_cast<int>(sen.size());
            for (int pos = 0; pos < len; ++pos) {
                const double lr =
                    std::max(cfg.lr * (1.0 - double(processed) / double(schedule_total)),
                             cfg.lr * 1e-4);
                ++processed;
                const int center = sen[pos];
                const int reduced = 1 + static_cast<int>(rng.below(uint64_t(cfg.window)));
                for (int off = -reduced; off <= reduced; ++off) {
                    if (off == 0) continue;
                    const int cpos = pos + off;
                    if (cpos < 0 || cpos >= len) continue;
                    const int ctx = sen[cpos];
                    double* u = &in[size_t(center) * D];
                    std::fill(neu1e.begin(), neu1e.end(), 0.0);
                    for (int k = 0; k <= cfg.negatives; ++k) {
                        int target;
                        double label;
                        if (k == 0) {
                            target = ctx;
                            label = 1.0;
                        } else {
                            target = draw_negative();
                            if (target == ctx) continue;
                            label = 0.0;
                        }
                        double* w = &out[size_t(target) * D];
                        double dot = 0;
                        for (int d = 0; d < D; ++d) dot += u[d] * w[d];
                        const double g = (label - sigmoid(dot)) * lr;
                        for (int d = 0; d < D; ++d) {
                            neu1e[d] += g * w[d];
                            w[d] += g * u[d];
                        }
                    }
                    for (int d = 0; d < D; ++d) u[d] += neu1e[d];
                }
            }
        }
    }
    return in;
}

}  // namespace votelab::nn
