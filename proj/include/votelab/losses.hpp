#pragma once

// Training objectives. The supervised loss needs labeled winning sets; the
// axiom losses are self-supervised penalties that score a model's logits
// against properties a voting rule ought to have, so they need no labels at
// all. Every loss returns a scalar graph node; callers share one forward
// pass per profile by passing the same logits node to several losses.

#include <stdexcept>
#include <vector>

#include "votelab/autodiff.hpp"
#include "votelab/core.hpp"
#include "votelab/models.hpp"
#include "votelab/sampling.hpp"

namespace votelab {

inline nn::NodePtr zero_scalar() { return nn::value(nn::Tensor({1})); }

inline std::vector<char> live_mask(int m, int m_max) {
    std::vector<char> mask(m_max, 0);
    for (int a = 0; a < m; ++a) mask[a] = 1;
    return mask;
}

// Mean binary cross-entropy over the profile's own alternatives, target 1
// for winners and 0 otherwise.
inline nn::NodePtr loss_bce(const nn::NodePtr& z, const Profile& p, const WinningSet& winners,
                            int m_max) {
    std::vector<double> target(m_max, 0.0);
    for (int a : winners) target[a] = 1.0;
    return nn::bce_with_logits(z, target, live_mask(p.m, m_max));
}

// Penalize sensitivity to voter order: mean KL between the output
// distribution and the outputs on `perms` random voter shuffles. Identically
// zero for the WEC model, whose forward pass never sees voter order.
inline nn::NodePtr loss_anonymity(const Model& model, const nn::NodePtr& z, const Profile& p,
                                  Rng& rng, int perms = 10) {
    if (p.n() < 2 || perms < 1) return zero_scalar();
    const auto mask = live_mask(p.m, model.config().m_max);
    std::vector<nn::NodePtr> terms;
    terms.reserve(perms);
    for (int i = 0; i < perms; ++i) {
        const Ranking tau = sample_ranking_ic(rng, p.n());
        terms.push_back(nn::kl_bernoulli(z, model.logits(permute_voters(p, tau)), mask));
    }
    return nn::mean_scalars(terms);
}

// When a profile has a Condorcet winner, pull the outputs toward electing
// exactly that alternative: KL against its (clamped) indicator vector.
inline nn::NodePtr loss_condorcet(const nn::NodePtr& z, const Profile& p, int m_max) {
    const auto cw = condorcet_winner(p);
    if (!cw) return zero_scalar();
    std::vector<double> target(m_max, 0.0);
    target[*cw] = 1.0;
    return nn::kl_bernoulli_const(z, target, live_mask(p.m, m_max));
}

// Push down the winning probability of every unanimously dominated
// alternative, once per dominating pair.
inline nn::NodePtr loss_pareto(const nn::NodePtr& z, const Profile& p) {
    const MarginMatrix mm(p);
    std::vector<int> losers;
    for (const auto& [x, y] : unanimous_pairs(mm)) losers.push_back(y);
    if (losers.empty()) return zero_scalar();
    return nn::sum_sigmoid_at(z, std::move(losers));
}

namespace lossdetail {
// Fresh uniform ranking keeping the voter's relative order of x and y.
inline Ranking resample_preserving_pair(Rng& rng, const Ranking& r, int x, int y) {
    const auto pos = rank_positions(r);
    const bool x_first = pos[x] < pos[y];
    for (;;) {
        Ranking cand = sample_ranking_ic(rng, static_cast<int>(r.size()));
        const auto cpos = rank_positions(cand);
        if ((cpos[x] < cpos[y]) == x_first) return cand;
    }
}
}  // namespace lossdetail

// Penalize dependence on irrelevant alternatives: for sampled pairs (x, y),
// rebuild every ballot with the x-versus-y comparison intact and sum the KL
// between the outputs restricted to those two coordinates.
inline nn::NodePtr loss_independence(const Model& model, const nn::NodePtr& z, const Profile& p,
                                     Rng& rng, int pairs = 5) {
    if (p.m < 2 || pairs < 1) return zero_scalar();
    const int m_max = model.config().m_max;
    std::vector<nn::NodePtr> terms;
    terms.reserve(pairs);
    for (int k = 0; k < pairs; ++k) {
        const int x = rng.below_int(p.m);
        int y = rng.below_int(p.m - 1);
        if (y >= x) ++y;
        Profile q;
        q.m = p.m;
        q.rankings.reserve(p.rankings.size());
        for (const Ranking& r : p.rankings)
            q.rankings.push_back(lossdetail::resample_preserving_pair(rng, r, x, y));
        std::vector<char> mask(m_max, 0);
        mask[x] = mask[y] = 1;
        terms.push_back(nn::kl_bernoulli(z, model.logits(q), mask));
    }
    return nn::weighted_sum(terms, std::vector<double>(terms.size(), 1.0));
}

// Demand at least one winner: hinge on the best coordinate's probability.
inline nn::NodePtr loss_no_winner(const nn::NodePtr& z, const Profile& p) {
    return nn::no_winner_hinge(z, p.m);
}

struct AxiomLossConfig {
    bool no_winner = true;
    bool condorcet = true;
    bool pareto = true;
    bool independence = false;
    bool anonymity = false;
    double weight_no_winner = 1.0;
    double weight_condorcet = 1.0;
    double weight_pareto = 1.0;
    double weight_independence = 1.0;
    double weight_anonymity = 1.0;
    int anonymity_perms = 10;
    int independence_pairs = 5;
};

// The enabled axiom losses over a single shared forward pass, kept apart
// for per-objective logging, plus their weighted sum. Stochastic terms draw
// from fixed forks of `base` so the value is reproducible for a given
// profile and seed.
struct AxiomLossParts {
    nn::NodePtr total;
    std::vector<std::pair<std::string, nn::NodePtr>> parts;  // unweighted
};

inline AxiomLossParts combined_axiom_loss_parts(const Model& model, const Profile& p,
                                                const Rng& base, const AxiomLossConfig& cfg) {
    const nn::NodePtr z = model.logits(p);
    AxiomLossParts out;
    std::vector<nn::NodePtr> terms;
    std::vector<double> weights;
    auto add = [&](const char* name, nn::NodePtr node, double w) {
        out.parts.emplace_back(name, node);
        terms.push_back(std::move(node));
        weights.push_back(w);
    };
    if (cfg.no_winner) add("no_winner", loss_no_winner(z, p), cfg.weight_no_winner);
    if (cfg.condorcet)
        add("condorcet", loss_condorcet(z, p, model.config().m_max), cfg.weight_condorcet);
    if (cfg.pareto) add("pareto", loss_pareto(z, p), cfg.weight_pareto);
    if (cfg.independence) {
        Rng rng = base.fork(0x494E44);  // "IND"
        add("independence", loss_independence(model, z, p, rng, cfg.independence_pairs),
            cfg.weight_independence);
    }
    if (cfg.anonymity) {
        Rng rng = base.fork(0x414E4F);  // "ANO"
        add("anonymity", loss_anonymity(model, z, p, rng, cfg.anonymity_perms),
            cfg.weight_anonymity);
    }
    out.total = terms.empty() ? zero_scalar() : nn::weighted_sum(terms, weights);
    return out;
}

inline nn::NodePtr combined_axiom_loss(const Model& model, const Profile& p, const Rng& base,
                                       const AxiomLossConfig& cfg) {
    return combined_axiom_loss_parts(model, p, base, cfg).total;
}

}  // namespace votelab
