#pragma once

// Axiom checks. Each check maps (voting function, profile) to
//   +1  satisfied,  -1  violated,  0  not applicable,
// and the satisfaction degree of a function is the percentage of +1 among a
// fixed number of applicable sampled profiles.
//
// Anonymity, neutrality and independence are sampled estimators: they probe
// a bounded number of permutations or perturbations rather than all of them,
// so -1 verdicts are sound while +1 verdicts hold up to sampling.

#include "votelab/rules.hpp"
#include "votelab/sampling.hpp"

namespace votelab {

enum class Axiom { anonymity, neutrality, condorcet, pareto, independence };

inline const char* to_string(Axiom a) {
    switch (a) {
        case Axiom::anonymity: return "anonymity";
        case Axiom::neutrality: return "neutrality";
        case Axiom::condorcet: return "condorcet";
        case Axiom::pareto: return "pareto";
        case Axiom::independence: return "independence";
    }
    throw std::invalid_argument("unknown axiom");
}

inline Axiom axiom_from_string(const std::string& s) {
    for (Axiom a : {Axiom::anonymity, Axiom::neutrality, Axiom::condorcet, Axiom::pareto,
                    Axiom::independence})
        if (s == to_string(a)) return a;
    throw std::invalid_argument("unknown axiom '" + s + "'");
}

inline const std::array<Axiom, 5>& all_axioms() {
    static const std::array<Axiom, 5> a = {Axiom::anonymity, Axiom::neutrality, Axiom::condorcet,
                                           Axiom::pareto, Axiom::independence};
    return a;
}

struct AxiomCheckConfig {
    int permutation_samples = 50;       // anonymity / neutrality probes
    int independence_variants = 4;      // order-preserving resamples per voter
    int independence_samples = 256;     // perturbed profiles per winner-loser pair
};

// Winners must not change when the ballots are reordered.
inline int check_anonymity(const VotingFunction& F, const Profile& p, Rng& rng,
                           const AxiomCheckConfig& cfg = {}) {
    if (p.n() < 2) return +1;
    WinningSet w = F(p);
    std::vector<int> tau(p.n());
    for (int i = 0; i < p.n(); ++i) tau[i] = i;
    for (int s = 0; s < cfg.permutation_samples; ++s) {
        for (int i = p.n() - 1; i > 0; --i) std::swap(tau[i], tau[rng.below_int(i + 1)]);
        if (F(permute_voters(p, tau)) != w) return -1;
    }
    return +1;
}

// Winners must follow any relabeling of the alternatives.
inline int check_neutrality(const VotingFunction& F, const Profile& p, Rng& rng,
                            const AxiomCheckConfig& cfg = {}) {
    if (p.m < 2) return +1;
    WinningSet w = F(p);
    std::vector<int> sigma(p.m);
    for (int i = 0; i < p.m; ++i) sigma[i] = i;
    for (int s = 0; s < cfg.permutation_samples; ++s) {
        for (int i = p.m - 1; i > 0; --i) std::swap(sigma[i], sigma[rng.below_int(i + 1)]);
        if (F(permute_alternatives(p, sigma)) != permute_winners(w, sigma)) return -1;
    }
    return +1;
}

// When a majority champion exists it must be the unique winner.
inline int check_condorcet(const VotingFunction& F, const Profile& p) {
    auto cw = condorcet_winner(p);
    if (!cw) return 0;
    return F(p) == WinningSet{*cw} ? +1 : -1;
}

// No unanimously dominated alternative may be chosen while its dominator is
// not: with every voter ranking x above y, electing y but not x fails.
inline int check_pareto(const VotingFunction& F, const Profile& p) {
    MarginMatrix mm(p);
    auto pairs = unanimous_pairs(mm);
    if (pairs.empty()) return 0;
    WinningSet w = F(p);
    auto wins = [&](int a) { return std::binary_search(w.begin(), w.end(), a); };
    for (auto [x, y] : pairs)
        if (wins(y) && !wins(x)) return -1;
    return +1;
}

// A rejected alternative must stay rejected when ballots change only in how
// they arrange the other alternatives (each voter's relative order of the
// winner-loser pair is preserved). Probed with sampled per-voter resamples.
inline int check_independence(const VotingFunction& F, const Profile& p, Rng& rng,
                              const AxiomCheckConfig& cfg = {}) {
    WinningSet w = F(p);
    if (static_cast<int>(w.size()) == p.m) return 0;  // nobody is rejected
    auto wins = [&](int a) { return std::binary_search(w.begin(), w.end(), a); };
    for (int x : w)
        for (int y = 0; y < p.m; ++y) {
            if (wins(y)) continue;
            // Per-voter pools of rankings preserving that voter's x-y order.
            std::vector<std::vector<Ranking>> pool(p.n());
            for (int v = 0; v < p.n(); ++v) {
                auto pos = rank_positions(p.rankings[v]);
                bool x_above = pos[x] < pos[y];
                pool[v].reserve(cfg.independence_variants);
                while (static_cast<int>(pool[v].size()) < cfg.independence_variants) {
                    Ranking r = sample_ranking_ic(rng, p.m);
                    auto rp = rank_positions(r);
                    if ((rp[x] < rp[y]) == x_above) pool[v].push_back(std::move(r));
                }
            }
            for (int s = 0; s < cfg.independence_samples; ++s) {
                Profile q;
                q.m = p.m;
                q.rankings.reserve(p.n());
                for (int v = 0; v < p.n(); ++v)
                    q.rankings.push_back(pool[v][rng.below_int(cfg.independence_variants)]);
                WinningSet wq = F(q);
                if (std::binary_search(wq.begin(), wq.end(), y)) return -1;
            }
        }
    return +1;
}

inline int check_axiom(Axiom a, const VotingFunction& F, const Profile& p, Rng& rng,
                       const AxiomCheckConfig& cfg = {}) {
    switch (a) {
        case Axiom::anonymity: return check_anonymity(F, p, rng, cfg);
        case Axiom::neutrality: return check_neutrality(F, p, rng, cfg);
        case Axiom::condorcet: return check_condorcet(F, p);
        case Axiom::pareto: return check_pareto(F, p);
        case Axiom::independence: return check_independence(F, p, rng, cfg);
    }
    throw std::invalid_argument("unknown axiom");
}

// --- satisfaction degree ----------------------------------------------------

struct SatisfactionConfig {
    int target_applicable = 400;
    long long max_attempts = 400000;  // sampling budget before giving up
    AxiomCheckConfig check;
};

struct SatisfactionResult {
    int applicable = 0;
    int satisfied = 0;
    double percent() const { return applicable ? 100.0 * satisfied / applicable : 0.0; }
};

// Percentage of +1 among `target_applicable` applicable profiles drawn from
// `spec`. Throws when the distribution cannot produce enough applicable
// profiles within the attempt budget.
inline SatisfactionResult satisfaction_degree(const VotingFunction& F, Axiom axiom,
                                              const SampleSpec& spec, uint64_t seed,
                                              const SatisfactionConfig& cfg = {}) {
    Rng profile_rng(derive_seed(seed, 0xA1));
    Rng check_rng(derive_seed(seed, 0xB2));
    SatisfactionResult res;
    long long attempts = 0;
    while (res.applicable < cfg.target_applicable) {
        if (++attempts > cfg.max_attempts)
            throw std::runtime_error(std::string("axiom '") + to_string(axiom) +
                                     "': not enough applicable profiles in budget");
        Profile p = sample_profile(profile_rng, spec);
        int v = check_axiom(axiom, F, p, check_rng, cfg.check);
        if (v == 0) continue;
        ++res.applicable;
        if (v > 0) ++res.satisfied;
    }
    return res;
}

}  // namespace votelab
