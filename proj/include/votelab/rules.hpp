#pragma once

// The sixteen voting rules. Every rule maps a profile to a nonempty sorted
// set of tied winners. Alternatives are 0..m-1 throughout; `alive` masks
// restrict a rule's view of the profile for elimination-style rules.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include "votelab/core.hpp"

namespace votelab {

enum class RuleId {
    plurality,
    borda,
    anti_plurality,
    copeland,
    llull,
    uncovered_set,
    top_cycle,
    banks,
    stable_voting,
    blacks,
    instant_runoff_tb,
    plurality_w_runoff_put,
    coombs,
    baldwin,
    weak_nanson,
    kemeny_young,
};

inline constexpr int kNumRules = 16;

inline constexpr std::array<RuleId, kNumRules> all_rule_ids() {
    return {RuleId::plurality,        RuleId::borda,
            RuleId::anti_plurality,   RuleId::copeland,
            RuleId::llull,            RuleId::uncovered_set,
            RuleId::top_cycle,        RuleId::banks,
            RuleId::stable_voting,    RuleId::blacks,
            RuleId::instant_runoff_tb, RuleId::plurality_w_runoff_put,
            RuleId::coombs,           RuleId::baldwin,
            RuleId::weak_nanson,      RuleId::kemeny_young};
}

inline const char* to_string(RuleId id) {
    switch (id) {
        case RuleId::plurality: return "plurality";
        case RuleId::borda: return "borda";
        case RuleId::anti_plurality: return "anti_plurality";
        case RuleId::copeland: return "copeland";
        case RuleId::llull: return "llull";
        case RuleId::uncovered_set: return "uncovered_set";
        case RuleId::top_cycle: return "top_cycle";
        case RuleId::banks: return "banks";
        case RuleId::stable_voting: return "stable_voting";
        case RuleId::blacks: return "blacks";
        case RuleId::instant_runoff_tb: return "instant_runoff_tb";
        case RuleId::plurality_w_runoff_put: return "plurality_w_runoff_put";
        case RuleId::coombs: return "coombs";
        case RuleId::baldwin: return "baldwin";
        case RuleId::weak_nanson: return "weak_nanson";
        case RuleId::kemeny_young: return "kemeny_young";
    }
    throw std::invalid_argument("unknown rule id");
}

inline RuleId rule_from_string(const std::string& s) {
    for (RuleId id : all_rule_ids())
        if (s == to_string(id)) return id;
    throw std::invalid_argument("unknown rule '" + s + "'");
}

namespace ruledetail {

inline WinningSet argmax_set(const std::vector<double>& score, const std::vector<int>& ids) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a : ids) best = std::max(best, score[a]);
    WinningSet w;
    for (int a : ids)
        if (score[a] == best) w.push_back(a);
    return w;
}

inline std::vector<int> all_alts(int m) {
    std::vector<int> v(m);
    for (int i = 0; i < m; ++i) v[i] = i;
    return v;
}

// Position-based scores over the alive subset; weight(pos, k) with k alive.
template <typename WeightFn>
std::vector<double> positional_scores(const Profile& p, const std::vector<int>& alive,
                                      WeightFn weight) {
    std::vector<char> live(p.m, 0);
    for (int a : alive) live[a] = 1;
    const int k = static_cast<int>(alive.size());
    std::vector<double> score(p.m, 0.0);
    for (const Ranking& r : p.rankings) {
        int pos = 0;
        for (int a : r)
            if (live[a]) score[a] += weight(pos++, k);
    }
    return score;
}

inline std::vector<double> plurality_scores(const Profile& p, const std::vector<int>& alive) {
    return positional_scores(p, alive, [](int pos, int) { return pos == 0 ? 1.0 : 0.0; });
}

inline std::vector<double> anti_plurality_scores(const Profile& p, const std::vector<int>& alive) {
    return positional_scores(p, alive, [](int pos, int k) { return pos == k - 1 ? 0.0 : 1.0; });
}

inline std::vector<double> borda_scores(const Profile& p, const std::vector<int>& alive) {
    return positional_scores(p, alive, [](int pos, int k) { return double(k - 1 - pos); });
}

// Strict-majority defeat digraph restricted to `alive`, edges weighted by
// margin; used by Split Cycle.
struct DefeatGraph {
    int m;
    std::vector<std::vector<int>> weight;  // weight[x][y] > 0 iff x defeats y

    DefeatGraph(const MarginMatrix& mm, const std::vector<int>& alive)
        : m(mm.m()), weight(mm.m(), std::vector<int>(mm.m(), 0)) {
        for (int x : alive)
            for (int y : alive)
                if (mm(x, y) > mm(y, x)) weight[x][y] = mm(x, y) - mm(y, x);
    }
};

// Mark, for every simple cycle, the minimum-weight edges on it. Cycles are
// enumerated once each by rooting the DFS at the cycle's smallest vertex.
inline void mark_weakest_cycle_edges(const DefeatGraph& g, std::vector<std::vector<char>>& cut) {
    std::vector<int> path;
    std::vector<char> on_path(g.m, 0);
    std::function<void(int, int)> dfs = [&](int root, int v) {
        for (int w = 0; w < g.m; ++w) {
            if (g.weight[v][w] <= 0) continue;
            if (w == root && path.size() >= 2) {
                int mn = std::numeric_limits<int>::max();
                for (size_t i = 0; i + 1 < path.size(); ++i)
                    mn = std::min(mn, g.weight[path[i]][path[i + 1]]);
                mn = std::min(mn, g.weight[path.back()][root]);
                for (size_t i = 0; i + 1 < path.size(); ++i)
                    if (g.weight[path[i]][path[i + 1]] == mn) cut[path[i]][path[i + 1]] = 1;
                if (g.weight[path.back()][root] == mn) cut[path.back()][root] = 1;
            } else if (w > root && !on_path[w]) {
                path.push_back(w);
                on_path[w] = 1;
                dfs(root, w);
                on_path[w] = 0;
                path.pop_back();
            }
        }
    };
    for (int root = 0; root < g.m; ++root) {
        path.assign(1, root);
        on_path.assign(g.m, 0);
        on_path[root] = 1;
        dfs(root, root);
    }
}

inline WinningSet split_cycle_on(const MarginMatrix& mm, const std::vector<int>& alive) {
    DefeatGraph g(mm, alive);
    std::vector<std::vector<char>> cut(g.m, std::vector<char>(g.m, 0));
    mark_weakest_cycle_edges(g, cut);
    WinningSet w;
    for (int x : alive) {
        bool defeated = false;
        for (int y : alive)
            if (g.weight[y][x] > 0 && !cut[y][x]) defeated = true;
        if (!defeated) w.push_back(x);
    }
    std::sort(w.begin(), w.end());
    return w;
}

inline std::optional<int> condorcet_winner_on(const MarginMatrix& mm,
                                              const std::vector<int>& alive) {
    for (int x : alive) {
        bool all = true;
        for (int y : alive)
            if (y != x && !mm.beats(x, y)) all = false;
        if (all) return x;
    }
    return std::nullopt;
}

}  // namespace ruledetail

// --- positional rules ---------------------------------------------------

inline WinningSet rule_plurality(const Profile& p) {
    auto ids = ruledetail::all_alts(p.m);
    return ruledetail::argmax_set(ruledetail::plurality_scores(p, ids), ids);
}

inline WinningSet rule_borda(const Profile& p) {
    auto ids = ruledetail::all_alts(p.m);
    return ruledetail::argmax_set(ruledetail::borda_scores(p, ids), ids);
}

inline WinningSet rule_anti_plurality(const Profile& p) {
    auto ids = ruledetail::all_alts(p.m);
    return ruledetail::argmax_set(ruledetail::anti_plurality_scores(p, ids), ids);
}

// --- pairwise-comparison rules ------------------------------------------

// Copeland score: majority wins minus majority losses.
inline WinningSet rule_copeland(const Profile& p) {
    MarginMatrix mm(p);
    auto ids = ruledetail::all_alts(p.m);
    std::vector<double> score(p.m, 0.0);
    for (int x = 0; x < p.m; ++x)
        for (int y = 0; y < p.m; ++y)
            if (y != x) score[x] += mm.beats(x, y) ? 1.0 : (mm.beats(y, x) ? -1.0 : 0.0);
    return ruledetail::argmax_set(score, ids);
}

// Llull score: opponents not beating you (wins plus ties).
inline WinningSet rule_llull(const Profile& p) {
    MarginMatrix mm(p);
    auto ids = ruledetail::all_alts(p.m);
    std::vector<double> score(p.m, 0.0);
    for (int x = 0; x < p.m; ++x)
        for (int y = 0; y < p.m; ++y)
            if (y != x && !mm.beats(y, x)) score[x] += 1.0;
    return ruledetail::argmax_set(score, ids);
}

// y covers x when y beats x and everything beating y also beats x; winners
// are the uncovered alternatives.
inline WinningSet rule_uncovered_set(const Profile& p) {
    MarginMatrix mm(p);
    WinningSet w;
    for (int x = 0; x < p.m; ++x) {
        bool covered = false;
        for (int y = 0; y < p.m && !covered; ++y) {
            if (y == x || !mm.beats(y, x)) continue;
            bool subset = true;
            for (int z = 0; z < p.m && subset; ++z)
                if (z != x && z != y && mm.beats(z, y) && !mm.beats(z, x)) subset = false;
            covered = subset;
        }
        if (!covered) w.push_back(x);
    }
    return w;
}

// Smallest set whose members all majority-beat all outsiders; computed as the
// alternatives that reach everyone through ties-or-wins steps.
inline WinningSet rule_top_cycle(const Profile& p) {
    MarginMatrix mm(p);
    std::vector<std::vector<char>> reach(p.m, std::vector<char>(p.m, 0));
    for (int x = 0; x < p.m; ++x) {
        reach[x][x] = 1;
        for (int y = 0; y < p.m; ++y)
            if (y != x && !mm.beats(y, x)) reach[x][y] = 1;
    }
    for (int k = 0; k < p.m; ++k)
        for (int x = 0; x < p.m; ++x)
            for (int y = 0; y < p.m; ++y)
                if (reach[x][k] && reach[k][y]) reach[x][y] = 1;
    WinningSet w;
    for (int x = 0; x < p.m; ++x) {
        bool all = true;
        for (int y = 0; y < p.m; ++y) all = all && reach[x][y];
        if (all) w.push_back(x);
    }
    return w;
}

// Tops of inclusion-maximal chains of the strict majority relation.
inline WinningSet rule_banks(const Profile& p) {
    MarginMatrix mm(p);
    const int m = p.m;
    std::vector<char> is_chain(size_t(1) << m, 0);
    std::vector<int> top_of(size_t(1) << m, -1);
    for (uint32_t s = 1; s < (1u << m); ++s) {
        std::vector<int> mem;
        for (int a = 0; a < m; ++a)
            if (s & (1u << a)) mem.push_back(a);
        // A chain is a subset the strict relation linearly orders.
        bool ok = true;
        int top = -1;
        for (int a : mem) {
            bool beats_all = true;
            for (int b : mem)
                if (b != a) {
                    if (!mm.beats(a, b) && !mm.beats(b, a)) ok = false;
                    if (!mm.beats(a, b)) beats_all = false;
                }
            if (beats_all) top = a;
        }
        // Linearity also needs transitivity; verify by sorting on wins.
        if (ok && mem.size() > 1) {
            std::vector<int> wins(m, 0);
            for (int a : mem)
                for (int b : mem)
                    if (b != a && mm.beats(a, b)) ++wins[a];
            std::vector<char> seen(mem.size() + 1, 0);
            for (int a : mem) {
                if (wins[a] >= static_cast<int>(mem.size()) || seen[wins[a]]) ok = false;
                else seen[wins[a]] = 1;
            }
        }
        is_chain[s] = ok && top >= 0;
        top_of[s] = top;
    }
    std::vector<char> winner(m, 0);
    for (uint32_t s = 1; s < (1u << m); ++s) {
        if (!is_chain[s]) continue;
        bool maximal = true;
        for (int z = 0; z < m && maximal; ++z)
            if (!(s & (1u << z)) && is_chain[s | (1u << z)]) maximal = false;
        if (maximal) winner[top_of[s]] = 1;
    }
    WinningSet w;
    for (int a = 0; a < m; ++a)
        if (winner[a]) w.push_back(a);
    return w;
}

// Split Cycle: discard, in every majority cycle, its weakest defeats; winners
// are the alternatives left undefeated.
inline WinningSet rule_split_cycle(const Profile& p) {
    MarginMatrix mm(p);
    return ruledetail::split_cycle_on(mm, ruledetail::all_alts(p.m));
}

// Stable Voting: with Split Cycle winners as candidates, x wins when it has a
// maximal margin over some y whose removal keeps x a (recursive) winner.
inline WinningSet rule_stable_voting(const Profile& p) {
    MarginMatrix mm(p);
    const int m = p.m;
    std::vector<WinningSet> memo(size_t(1) << m);
    std::vector<char> done(size_t(1) << m, 0);
    std::function<const WinningSet&(uint32_t)> sv = [&](uint32_t mask) -> const WinningSet& {
        if (done[mask]) return memo[mask];
        done[mask] = 1;
        std::vector<int> alive;
        for (int a = 0; a < m; ++a)
            if (mask & (1u << a)) alive.push_back(a);
        if (alive.size() == 1) {
            memo[mask] = {alive[0]};
            return memo[mask];
        }
        WinningSet sc = ruledetail::split_cycle_on(mm, alive);
        if (sc.size() == 1) {
            memo[mask] = sc;
            return memo[mask];
        }
        int best = std::numeric_limits<int>::min();
        WinningSet w;
        for (int x : sc) {
            for (int y : alive) {
                if (y == x) continue;
                const WinningSet& sub = sv(mask & ~(1u << y));
                if (!std::binary_search(sub.begin(), sub.end(), x)) continue;
                int margin = mm(x, y) - mm(y, x);
                if (margin > best) {
                    best = margin;
                    w = {x};
                } else if (margin == best &&
                           !std::binary_search(w.begin(), w.end(), x)) {
                    w.insert(std::lower_bound(w.begin(), w.end(), x), x);
                }
            }
        }
        memo[mask] = w.empty() ? sc : w;
        return memo[mask];
    };
    return sv((uint32_t(1) << m) - 1);
}

// Condorcet winner when one exists, Borda winners otherwise.
inline WinningSet rule_blacks(const Profile& p) {
    if (auto cw = condorcet_winner(p)) return {*cw};
    return rule_borda(p);
}

// --- elimination rules ---------------------------------------------------

// Instant runoff with a deterministic tiebreak: repeatedly drop the single
// lowest-indexed alternative with the fewest first places; stop as soon as
// one alternative holds a strict majority of first places.
inline WinningSet rule_instant_runoff_tb(const Profile& p) {
    std::vector<int> alive = ruledetail::all_alts(p.m);
    const double half = p.n() / 2.0;
    while (alive.size() > 1) {
        auto score = ruledetail::plurality_scores(p, alive);
        for (int a : alive)
            if (score[a] > half) return {a};
        int worst = alive[0];
        for (int a : alive)
            if (score[a] < score[worst]) worst = a;
        alive.erase(std::find(alive.begin(), alive.end(), worst));
    }
    return {alive[0]};
}

// Plurality with runoff, parallel-universe tie handling: every way of picking
// the two finalists among tied scores spawns a universe; the union of all
// universes' runoff winners is returned.
inline WinningSet rule_plurality_w_runoff_put(const Profile& p) {
    if (p.m == 1) return {0};
    auto ids = ruledetail::all_alts(p.m);
    auto score = ruledetail::plurality_scores(p, ids);
    for (int a : ids)
        if (score[a] > p.n() / 2.0) return {a};
    WinningSet first = ruledetail::argmax_set(score, ids);
    std::vector<std::pair<int, int>> finals;
    if (first.size() >= 2) {
        for (size_t i = 0; i < first.size(); ++i)
            for (size_t j = i + 1; j < first.size(); ++j)
                finals.emplace_back(first[i], first[j]);
    } else {
        std::vector<int> rest;
        for (int a : ids)
            if (a != first[0]) rest.push_back(a);
        WinningSet second = ruledetail::argmax_set(score, rest);
        for (int s : second) finals.emplace_back(first[0], s);
    }
    MarginMatrix mm(p);
    std::vector<char> winner(p.m, 0);
    for (auto [x, y] : finals) {
        if (!mm.beats(y, x)) winner[x] = 1;
        if (!mm.beats(x, y)) winner[y] = 1;
    }
    WinningSet w;
    for (int a : ids)
        if (winner[a]) w.push_back(a);
    return w;
}

enum class EliminationCriterion {
    lowest_plurality,
    lowest_anti_plurality,
    lowest_borda,
    below_average_borda,
};

// Round-based elimination. Plurality-style criteria stop early on a strict
// first-place majority; Borda-style criteria run until scores no longer
// separate anyone. If a round would eliminate every survivor, the survivors
// tie and all win.
inline WinningSet iterative_elimination(const Profile& p, EliminationCriterion crit) {
    std::vector<int> alive = ruledetail::all_alts(p.m);
    const double half = p.n() / 2.0;
    while (alive.size() > 1) {
        const bool majority_stop =
            crit == EliminationCriterion::lowest_plurality ||
            crit == EliminationCriterion::lowest_anti_plurality;
        if (majority_stop) {
            auto firsts = ruledetail::plurality_scores(p, alive);
            for (int a : alive)
                if (firsts[a] > half) return {a};
        }
        std::vector<double> score;
        switch (crit) {
            case EliminationCriterion::lowest_plurality:
                score = ruledetail::plurality_scores(p, alive);
                break;
            case EliminationCriterion::lowest_anti_plurality:
                score = ruledetail::anti_plurality_scores(p, alive);
                break;
            case EliminationCriterion::lowest_borda:
            case EliminationCriterion::below_average_borda:
                score = ruledetail::borda_scores(p, alive);
                break;
        }
        std::vector<int> out;
        if (crit == EliminationCriterion::below_average_borda) {
            double avg = 0;
            for (int a : alive) avg += score[a];
            avg /= double(alive.size());
            for (int a : alive)
                if (score[a] <= avg) out.push_back(a);
        } else {
            double worst = std::numeric_limits<double>::infinity();
            for (int a : alive) worst = std::min(worst, score[a]);
            for (int a : alive)
                if (score[a] == worst) out.push_back(a);
        }
        if (out.size() == alive.size()) {
            WinningSet w(alive.begin(), alive.end());
            std::sort(w.begin(), w.end());
            return w;
        }
        std::vector<int> next;
        for (int a : alive)
            if (std::find(out.begin(), out.end(), a) == out.end()) next.push_back(a);
        alive = std::move(next);
    }
    return {alive[0]};
}

inline WinningSet rule_coombs(const Profile& p) {
    return iterative_elimination(p, EliminationCriterion::lowest_anti_plurality);
}

inline WinningSet rule_baldwin(const Profile& p) {
    return iterative_elimination(p, EliminationCriterion::lowest_borda);
}

inline WinningSet rule_weak_nanson(const Profile& p) {
    return iterative_elimination(p, EliminationCriterion::below_average_borda);
}

// --- optimization rule ----------------------------------------------------

// Kemeny-Young: tops of the orders maximizing total pairwise agreement.
inline WinningSet rule_kemeny_young(const Profile& p) {
    MarginMatrix mm(p);
    std::vector<int> order(p.m);
    for (int i = 0; i < p.m; ++i) order[i] = i;
    long long best = std::numeric_limits<long long>::min();
    std::vector<char> winner(p.m, 0);
    do {
        long long s = 0;
        for (int i = 0; i < p.m; ++i)
            for (int j = i + 1; j < p.m; ++j) s += mm(order[i], order[j]);
        if (s > best) {
            best = s;
            std::fill(winner.begin(), winner.end(), 0);
        }
        if (s == best) winner[order[0]] = 1;
    } while (std::next_permutation(order.begin(), order.end()));
    WinningSet w;
    for (int a = 0; a < p.m; ++a)
        if (winner[a]) w.push_back(a);
    return w;
}

// --- dispatch --------------------------------------------------------------

inline WinningSet apply_rule(RuleId id, const Profile& p) {
    switch (id) {
        case RuleId::plurality: return rule_plurality(p);
        case RuleId::borda: return rule_borda(p);
        case RuleId::anti_plurality: return rule_anti_plurality(p);
        case RuleId::copeland: return rule_copeland(p);
        case RuleId::llull: return rule_llull(p);
        case RuleId::uncovered_set: return rule_uncovered_set(p);
        case RuleId::top_cycle: return rule_top_cycle(p);
        case RuleId::banks: return rule_banks(p);
        case RuleId::stable_voting: return rule_stable_voting(p);
        case RuleId::blacks: return rule_blacks(p);
        case RuleId::instant_runoff_tb: return rule_instant_runoff_tb(p);
        case RuleId::plurality_w_runoff_put: return rule_plurality_w_runoff_put(p);
        case RuleId::coombs: return rule_coombs(p);
        case RuleId::baldwin: return rule_baldwin(p);
        case RuleId::weak_nanson: return rule_weak_nanson(p);
        case RuleId::kemeny_young: return rule_kemeny_young(p);
    }
    throw std::invalid_argument("unknown rule id");
}

// Any profile -> winning set map. Classical rules, learned models, and
// decoded networks all fit this shape.
using VotingFunction = std::function<WinningSet(const Profile&)>;

inline VotingFunction make_rule_function(RuleId id) {
    return [id](const Profile& p) { return apply_rule(id, p); };
}

}  // namespace votelab
