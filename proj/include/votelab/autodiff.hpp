#pragma once

// Minimal reverse-mode autodiff over dense double tensors. A forward pass
// builds a graph of shared_ptr nodes; backward() walks it in reverse
// creation order (creation order is a valid topological order because every
// op is created after its inputs). Ops whose inputs carry no gradient
// produce detached nodes, so evaluation-only forwards never build a graph.
//
// The op set is deliberately composite: each voting-specific loss is a
// single node with a hand-derived gradient, which keeps graphs small and the
// numerics explicit.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace votelab::nn {

struct Tensor {
    std::vector<int> shape;
    std::vector<double> v;

    Tensor() = default;
    explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
        v.assign(static_cast<size_t>(count(shape)), 0.0);
    }

    static int64_t count(const std::vector<int>& s) {
        int64_t c = 1;
        for (int d : s) {
            if (d <= 0) throw std::invalid_argument("tensor dims must be positive");
            c *= d;
        }
        return c;
    }

    int64_t size() const { return static_cast<int64_t>(v.size()); }
    double& operator[](int64_t i) { return v[static_cast<size_t>(i)]; }
    double operator[](int64_t i) const { return v[static_cast<size_t>(i)]; }
};

class Node;
using NodePtr = std::shared_ptr<Node>;

class Node {
public:
    Tensor val;
    Tensor grad;  // always same shape as val, zero until backward
    std::vector<NodePtr> parents;
    std::function<void(Node&)> back;  // adds into parents' grads
    bool needs_grad = false;
    uint64_t order;

    Node(Tensor t, bool ng) : val(std::move(t)), needs_grad(ng), order(next()) {
        grad = Tensor(val.shape);
    }

private:
    static uint64_t next() {
        static std::atomic<uint64_t> counter{0};
        return ++counter;
    }
};

// Input data: never receives gradient.
inline NodePtr value(Tensor t) { return std::make_shared<Node>(std::move(t), false); }

// Trainable leaf.
inline NodePtr parameter(Tensor t) { return std::make_shared<Node>(std::move(t), true); }

// While a NoGradGuard is alive on a thread, ops on that thread produce
// detached nodes: no parents are retained and backward closures are dropped,
// so evaluation-only forwards cost no graph memory.
inline bool& grad_enabled() {
    thread_local bool enabled = true;
    return enabled;
}

struct NoGradGuard {
    bool prev;
    NoGradGuard() : prev(grad_enabled()) { grad_enabled() = false; }
    ~NoGradGuard() { grad_enabled() = prev; }
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;
};

inline NodePtr make_op(Tensor out, std::vector<NodePtr> parents,
                       std::function<void(Node&)> back) {
    bool ng = false;
    if (grad_enabled())
        for (const NodePtr& p : parents) ng = ng || p->needs_grad;
    auto n = std::make_shared<Node>(std::move(out), ng);
    if (ng) {
        n->parents = std::move(parents);
        n->back = std::move(back);
    }
    return n;
}

// Backpropagate from a scalar root through every reachable node.
inline void backward(const NodePtr& root) {
    if (root->val.size() != 1) throw std::invalid_argument("backward needs a scalar root");
    if (!root->needs_grad) return;
    std::vector<Node*> seen;
    std::unordered_set<Node*> mark;
    std::vector<Node*> stack{root.get()};
    while (!stack.empty()) {
        Node* n = stack.back();
        stack.pop_back();
        if (!mark.insert(n).second) continue;
        seen.push_back(n);
        for (const NodePtr& p : n->parents)
            if (p->needs_grad) stack.push_back(p.get());
    }
    std::sort(seen.begin(), seen.end(),
              [](const Node* a, const Node* b) { return a->order > b->order; });
    root->grad[0] = 1.0;
    for (Node* n : seen)
        if (n->back) n->back(*n);
}

inline void zero_grad(const std::vector<NodePtr>& params) {
    for (const NodePtr& p : params) std::fill(p->grad.v.begin(), p->grad.v.end(), 0.0);
}

inline double sigmoid(double z) {
    return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

// --- layers -----------------------------------------------------------------

// y = W x + b with W:[out,in], b:[out], x:[in].
inline NodePtr linear(const NodePtr& W, const NodePtr& b, const NodePtr& x) {
    const int out = W->val.shape[0], in = W->val.shape[1];
    if (x->val.size() != in || b->val.size() != out)
        throw std::invalid_argument("linear: shape mismatch");
    Tensor y({out});
    for (int i = 0; i < out; ++i) {
        double s = b->val[i];
        const double* w = &W->val.v[size_t(i) * in];
        for (int j = 0; j < in; ++j) s += w[j] * x->val[j];
        y[i] = s;
    }
    return make_op(std::move(y), {W, b, x}, [out, in](Node& n) {
        Node& W = *n.parents[0];
        Node& b = *n.parents[1];
        Node& x = *n.parents[2];
        for (int i = 0; i < out; ++i) {
            const double g = n.grad[i];
            if (g == 0.0) continue;
            if (b.needs_grad) b.grad[i] += g;
            const double* w = &W.val.v[size_t(i) * in];
            if (W.needs_grad) {
                double* gw = &W.grad.v[size_t(i) * in];
                for (int j = 0; j < in; ++j) gw[j] += g * x.val[j];
            }
            if (x.needs_grad)
                for (int j = 0; j < in; ++j) x.grad[j] += g * w[j];
        }
    });
}

inline NodePtr relu(const NodePtr& x) {
    Tensor y(x->val.shape);
    for (int64_t i = 0; i < x->val.size(); ++i) y[i] = std::max(0.0, x->val[i]);
    return make_op(std::move(y), {x}, [](Node& n) {
        Node& x = *n.parents[0];
        if (!x.needs_grad) return;
        for (int64_t i = 0; i < x.val.size(); ++i)
            if (x.val[i] > 0.0) x.grad[i] += n.grad[i];
    });
}

// Valid cross-correlation, stride 1. x:[C,H,W], K:[OC,C,kh,kw], b:[OC].
inline NodePtr conv2d(const NodePtr& K, const NodePtr& b, const NodePtr& x) {
    const int OC = K->val.shape[0], C = K->val.shape[1];
    const int kh = K->val.shape[2], kw = K->val.shape[3];
    const int H = x->val.shape[1], W = x->val.shape[2];
    if (x->val.shape[0] != C || H < kh || W < kw)
        throw std::invalid_argument("conv2d: shape mismatch");
    const int OH = H - kh + 1, OW = W - kw + 1;
    Tensor y({OC, OH, OW});
    auto xi = [=](int c, int h, int w) { return (size_t(c) * H + h) * W + w; };
    auto ki = [=](int oc, int c, int i, int j) {
        return ((size_t(oc) * C + c) * kh + i) * kw + j;
    };
    auto yi = [=](int oc, int h, int w) { return (size_t(oc) * OH + h) * OW + w; };
    for (int oc = 0; oc < OC; ++oc)
        for (int oh = 0; oh < OH; ++oh)
            for (int ow = 0; ow < OW; ++ow) {
                double s = b->val[oc];
                for (int c = 0; c < C; ++c)
                    for (int i = 0; i < kh; ++i)
                        for (int j = 0; j < kw; ++j)
                            s += K->val[ki(oc, c, i, j)] * x->val[xi(c, oh + i, ow + j)];
                y[yi(oc, oh, ow)] = s;
            }
    return make_op(std::move(y), {K, b, x}, [=](Node& n) {
        Node& K = *n.parents[0];
        Node& b = *n.parents[1];
        Node& x = *n.parents[2];
        for (int oc = 0; oc < OC; ++oc)
            for (int oh = 0; oh < OH; ++oh)
                for (int ow = 0; ow < OW; ++ow) {
                    const double g = n.grad[yi(oc, oh, ow)];
                    if (g == 0.0) continue;
                    if (b.needs_grad) b.grad[oc] += g;
                    for (int c = 0; c < C; ++c)
                        for (int i = 0; i < kh; ++i)
                            for (int j = 0; j < kw; ++j) {
                                if (K.needs_grad)
                                    K.grad[ki(oc, c, i, j)] += g * x.val[xi(c, oh + i, ow + j)];
                                if (x.needs_grad)
                                    x.grad[xi(c, oh + i, ow + j)] += g * K.val[ki(oc, c, i, j)];
                            }
                }
    });
}

inline NodePtr flatten(const NodePtr& x) {
    Tensor y({static_cast<int>(x->val.size())});
    y.v = x->val.v;
    return make_op(std::move(y), {x}, [](Node& n) {
        Node& x = *n.parents[0];
        if (!x.needs_grad) return;
        for (int64_t i = 0; i < x.val.size(); ++i) x.grad[i] += n.grad[i];
    });
}

// Mean of embedding rows E[id] over ids. The caller passes ids in sorted
// order; summing in that fixed order makes the result independent of how the
// caller's sequence was originally arranged, bit for bit.
inline NodePtr embedding_mean(const NodePtr& E, std::vector<int> ids) {
    const int V = E->val.shape[0], D = E->val.shape[1];
    if (ids.empty()) throw std::invalid_argument("embedding_mean: no ids");
    for (int id : ids)
        if (id < 0 || id >= V) throw std::invalid_argument("embedding_mean: id out of range");
    Tensor y({D});
    for (int id : ids)
        for (int d = 0; d < D; ++d) y[d] += E->val[size_t(id) * D + d];
    const double inv = 1.0 / double(ids.size());
    for (int d = 0; d < D; ++d) y[d] *= inv;
    return make_op(std::move(y), {E}, [ids = std::move(ids), D, inv](Node& n) {
        Node& E = *n.parents[0];
        if (!E.needs_grad) return;
        for (int id : ids)
            for (int d = 0; d < D; ++d) E.grad[size_t(id) * D + d] += inv * n.grad[d];
    });
}

// y = g * (x - mean) / sqrt(var + eps) + b, statistics over the whole vector.
inline NodePtr layer_norm(const NodePtr& x, const NodePtr& g, const NodePtr& b,
                          double eps = 1e-5) {
    const int64_t N = x->val.size();
    if (g->val.size() != N || b->val.size() != N)
        throw std::invalid_argument("layer_norm: shape mismatch");
    double mu = 0;
    for (int64_t i = 0; i < N; ++i) mu += x->val[i];
    mu /= double(N);
    double var = 0;
    for (int64_t i = 0; i < N; ++i) var += (x->val[i] - mu) * (x->val[i] - mu);
    var /= double(N);
    const double s = std::sqrt(var + eps);
    Tensor y(x->val.shape);
    for (int64_t i = 0; i < N; ++i) y[i] = g->val[i] * (x->val[i] - mu) / s + b->val[i];
    return make_op(std::move(y), {x, g, b}, [mu, s, N](Node& n) {
        Node& x = *n.parents[0];
        Node& g = *n.parents[1];
        Node& b = *n.parents[2];
        // gradient w.r.t. the normalized vector
        std::vector<double> gxh(static_cast<size_t>(N));
        double sum_gxh = 0, sum_gxh_xh = 0;
        for (int64_t i = 0; i < N; ++i) {
            const double xh = (x.val[i] - mu) / s;
            gxh[i] = n.grad[i] * g.val[i];
            sum_gxh += gxh[i];
            sum_gxh_xh += gxh[i] * xh;
            if (g.needs_grad) g.grad[i] += n.grad[i] * xh;
            if (b.needs_grad) b.grad[i] += n.grad[i];
        }
        if (x.needs_grad)
            for (int64_t i = 0; i < N; ++i) {
                const double xh = (x.val[i] - mu) / s;
                x.grad[i] += (gxh[i] - sum_gxh / N - xh * sum_gxh_xh / N) / s;
            }
    });
}

// --- scalar losses ----------------------------------------------------------

// Mean over masked coords of softplus(z) - t*z  (binary cross-entropy on
// logits; numerically stable for large |z|).
inline NodePtr bce_with_logits(const NodePtr& z, const std::vector<double>& target,
                               const std::vector<char>& mask) {
    const int64_t N = z->val.size();
    if (static_cast<int64_t>(target.size()) != N || static_cast<int64_t>(mask.size()) != N)
        throw std::invalid_argument("bce_with_logits: shape mismatch");
    int64_t k = 0;
    double L = 0;
    for (int64_t i = 0; i < N; ++i) {
        if (!mask[i]) continue;
        ++k;
        L += softplus(z->val[i]) - target[i] * z->val[i];
    }
    if (k == 0) throw std::invalid_argument("bce_with_logits: empty mask");
    Tensor y({1});
    y[0] = L / double(k);
    return make_op(std::move(y), {z}, [target, mask, k, N](Node& n) {
        Node& z = *n.parents[0];
        if (!z.needs_grad) return;
        const double g = n.grad[0] / double(k);
        for (int64_t i = 0; i < N; ++i)
            if (mask[i]) z.grad[i] += g * (sigmoid(z.val[i]) - target[i]);
    });
}

// Mean over masked coords of (x - t)^2.
inline NodePtr mse_to_const(const NodePtr& x, const std::vector<double>& target) {
    const int64_t N = x->val.size();
    if (static_cast<int64_t>(target.size()) != N)
        throw std::invalid_argument("mse_to_const: shape mismatch");
    double L = 0;
    for (int64_t i = 0; i < N; ++i) L += (x->val[i] - target[i]) * (x->val[i] - target[i]);
    Tensor y({1});
    y[0] = L / double(N);
    return make_op(std::move(y), {x}, [target, N](Node& n) {
        Node& x = *n.parents[0];
        if (!x.needs_grad) return;
        const double g = n.grad[0] * 2.0 / double(N);
        for (int64_t i = 0; i < N; ++i) x.grad[i] += g * (x.val[i] - target[i]);
    });
}

namespace detail {
inline double clamp01(double p, double eps) { return std::min(std::max(p, eps), 1.0 - eps); }
}

// Sum over masked coords of KL between Bernoulli(sigmoid(z_i)) and a constant
// Bernoulli(q_i); probabilities clamped to [eps, 1-eps], gradient zero where
// the clamp is active.
inline NodePtr kl_bernoulli_const(const NodePtr& z, const std::vector<double>& q,
                                  const std::vector<char>& mask, double eps = 1e-6) {
    const int64_t N = z->val.size();
    if (static_cast<int64_t>(q.size()) != N || static_cast<int64_t>(mask.size()) != N)
        throw std::invalid_argument("kl_bernoulli_const: shape mismatch");
    double L = 0;
    for (int64_t i = 0; i < N; ++i) {
        if (!mask[i]) continue;
        const double p = detail::clamp01(sigmoid(z->val[i]), eps);
        const double qq = detail::clamp01(q[i], eps);
        L += p * std::log(p / qq) + (1.0 - p) * std::log((1.0 - p) / (1.0 - qq));
    }
    Tensor y({1});
    y[0] = L;
    return make_op(std::move(y), {z}, [q, mask, eps, N](Node& n) {
        Node& z = *n.parents[0];
        if (!z.needs_grad) return;
        for (int64_t i = 0; i < N; ++i) {
            if (!mask[i]) continue;
            const double raw = sigmoid(z.val[i]);
            if (raw <= eps || raw >= 1.0 - eps) continue;  // clamped: flat
            const double qq = detail::clamp01(q[i], eps);
            // dKL/dp = logit(p) - logit(q); dp/dz = p(1-p)
            const double dLdp = std::log(raw / (1.0 - raw)) - std::log(qq / (1.0 - qq));
            z.grad[i] += n.grad[0] * dLdp * raw * (1.0 - raw);
        }
    });
}

// Sum over masked coords of KL between Bernoulli(sigmoid(zp_i)) and
// Bernoulli(sigmoid(zq_i)); both sides clamped, both receive gradient.
inline NodePtr kl_bernoulli(const NodePtr& zp, const NodePtr& zq, const std::vector<char>& mask,
                            double eps = 1e-6) {
    const int64_t N = zp->val.size();
    if (zq->val.size() != N || static_cast<int64_t>(mask.size()) != N)
        throw std::invalid_argument("kl_bernoulli: shape mismatch");
    double L = 0;
    for (int64_t i = 0; i < N; ++i) {
        if (!mask[i]) continue;
        const double p = detail::clamp01(sigmoid(zp->val[i]), eps);
        const double q = detail::clamp01(sigmoid(zq->val[i]), eps);
        L += p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    }
    Tensor y({1});
    y[0] = L;
    return make_op(std::move(y), {zp, zq}, [mask, eps, N](Node& n) {
        Node& zp = *n.parents[0];
        Node& zq = *n.parents[1];
        for (int64_t i = 0; i < N; ++i) {
            if (!mask[i]) continue;
            const double p_raw = sigmoid(zp.val[i]);
            const double q_raw = sigmoid(zq.val[i]);
            const double p = detail::clamp01(p_raw, eps);
            const double q = detail::clamp01(q_raw, eps);
            if (zp.needs_grad && p_raw > eps && p_raw < 1.0 - eps) {
                const double dLdp = std::log(p / (1.0 - p)) - std::log(q / (1.0 - q));
                zp.grad[i] += n.grad[0] * dLdp * p_raw * (1.0 - p_raw);
            }
            if (zq.needs_grad && q_raw > eps && q_raw < 1.0 - eps) {
                const double dLdq = -p / q + (1.0 - p) / (1.0 - q);
                zq.grad[i] += n.grad[0] * dLdq * q_raw * (1.0 - q_raw);
            }
        }
    });
}

// Sum of sigmoid(z_i) over an index list (repeats allowed).
inline NodePtr sum_sigmoid_at(const NodePtr& z, std::vector<int> idx) {
    double L = 0;
    for (int i : idx) L += sigmoid(z->val[i]);
    Tensor y({1});
    y[0] = L;
    return make_op(std::move(y), {z}, [idx = std::move(idx)](Node& n) {
        Node& z = *n.parents[0];
        if (!z.needs_grad) return;
        for (int i : idx) {
            const double s = sigmoid(z.val[i]);
            z.grad[i] += n.grad[0] * s * (1.0 - s);
        }
    });
}

// max(0, 0.5 - max_{i < live} sigmoid(z_i)): pushes at least one coordinate
// above the decision threshold. Subgradient flows to the (first) argmax.
inline NodePtr no_winner_hinge(const NodePtr& z, int live) {
    if (live < 1 || live > z->val.size()) throw std::invalid_argument("no_winner_hinge: live");
    int arg = 0;
    for (int i = 1; i < live; ++i)
        if (z->val[i] > z->val[arg]) arg = i;
    const double L = std::max(0.0, 0.5 - sigmoid(z->val[arg]));
    Tensor y({1});
    y[0] = L;
    return make_op(std::move(y), {z}, [arg, L](Node& n) {
        Node& z = *n.parents[0];
        if (!z.needs_grad || L == 0.0) return;
        const double s = sigmoid(z.val[arg]);
        z.grad[arg] += n.grad[0] * (-s * (1.0 - s));
    });
}

// c0 + sum_i w_i * x_i over scalar nodes.
inline NodePtr weighted_sum(const std::vector<NodePtr>& xs, const std::vector<double>& ws,
                            double c0 = 0.0) {
    if (xs.size() != ws.size()) throw std::invalid_argument("weighted_sum: size mismatch");
    double L = c0;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i]->val.size() != 1) throw std::invalid_argument("weighted_sum: non-scalar");
        L += ws[i] * xs[i]->val[0];
    }
    Tensor y({1});
    y[0] = L;
    return make_op(std::move(y), xs, [ws](Node& n) {
        for (size_t i = 0; i < n.parents.size(); ++i)
            if (n.parents[i]->needs_grad) n.parents[i]->grad[0] += n.grad[0] * ws[i];
    });
}

inline NodePtr mean_scalars(const std::vector<NodePtr>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean_scalars: empty");
    return weighted_sum(xs, std::vector<double>(xs.size(), 1.0 / double(xs.size())));
}

}  // namespace votelab::nn
