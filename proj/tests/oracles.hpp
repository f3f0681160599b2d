#pragma once

// Naive reference implementations of every rule, written straight from the
// definitions with no shared code or data structures beyond core types.
// Deliberately slow (subset/permutation enumeration, profile rebuilding);
// they exist only to cross-check the real implementations on small inputs.

#include <climits>
#include <set>
#include <stdexcept>

#include "votelab/core.hpp"
#include "votelab/rules.hpp"  // RuleId only; no rule implementations are used

namespace oracle {

using votelab::Profile;
using votelab::Ranking;
using votelab::WinningSet;

inline int count_pref(const Profile& p, int x, int y) {
    int c = 0;
    for (const Ranking& r : p.rankings)
        for (int a : r) {
            if (a == x) {
                ++c;
                break;
            }
            if (a == y) break;
        }
    return c;
}

inline int margin(const Profile& p, int x, int y) {
    return count_pref(p, x, y) - count_pref(p, y, x);
}

inline bool beats(const Profile& p, int x, int y) { return margin(p, x, y) > 0; }

inline WinningSet max_score_set(const std::vector<long long>& score) {
    long long best = LLONG_MIN;
    for (long long s : score) best = std::max(best, s);
    WinningSet w;
    for (int a = 0; a < static_cast<int>(score.size()); ++a)
        if (score[a] == best) w.push_back(a);
    return w;
}

inline WinningSet plurality(const Profile& p) {
    std::vector<long long> s(p.m, 0);
    for (const Ranking& r : p.rankings) ++s[r.front()];
    return max_score_set(s);
}

inline WinningSet borda(const Profile& p) {
    std::vector<long long> s(p.m, 0);
    for (const Ranking& r : p.rankings)
        for (int i = 0; i < p.m; ++i) s[r[i]] += p.m - 1 - i;
    return max_score_set(s);
}

inline WinningSet anti_plurality(const Profile& p) {
    std::vector<long long> s(p.m, 0);
    for (const Ranking& r : p.rankings)
        for (int a : r)
            if (a != r.back()) ++s[a];
    return max_score_set(s);
}

inline std::optional<int> condorcet(const Profile& p) {
    for (int x = 0; x < p.m; ++x) {
        bool ok = true;
        for (int y = 0; y < p.m; ++y)
            if (y != x && !beats(p, x, y)) ok = false;
        if (ok) return x;
    }
    return std::nullopt;
}

inline WinningSet copeland(const Profile& p) {
    std::vector<long long> s(p.m, 0);
    for (int x = 0; x < p.m; ++x)
        for (int y = 0; y < p.m; ++y) {
            if (y == x) continue;
            if (beats(p, x, y)) ++s[x];
            if (beats(p, y, x)) --s[x];
        }
    return max_score_set(s);
}

inline WinningSet llull(const Profile& p) {
    std::vector<long long> s(p.m, 0);
    for (int x = 0; x < p.m; ++x)
        for (int y = 0; y < p.m; ++y)
            if (y != x && margin(p, x, y) >= 0) ++s[x];
    return max_score_set(s);
}

inline WinningSet uncovered_set(const Profile& p) {
    WinningSet w;
    for (int x = 0; x < p.m; ++x) {
        bool covered = false;
        for (int y = 0; y < p.m; ++y) {
            if (y == x || !beats(p, y, x)) continue;
            bool cover = true;
            for (int z = 0; z < p.m; ++z)
                if (beats(p, z, y) && !beats(p, z, x)) cover = false;
            if (cover) covered = true;
        }
        if (!covered) w.push_back(x);
    }
    return w;
}

// Smallest set whose members all strictly beat all non-members, found by
// brute-force subset search (unique by theory; verified here).
inline WinningSet top_cycle(const Profile& p) {
    for (int k = 1; k <= p.m; ++k) {
        std::vector<WinningSet> found;
        for (uint32_t s = 1; s < (1u << p.m); ++s) {
            WinningSet mem;
            for (int a = 0; a < p.m; ++a)
                if (s & (1u << a)) mem.push_back(a);
            if (static_cast<int>(mem.size()) != k) continue;
            bool dominant = true;
            for (int x : mem)
                for (int y = 0; y < p.m; ++y)
                    if (!(s & (1u << y)) && !beats(p, x, y)) dominant = false;
            if (dominant) found.push_back(mem);
        }
        if (!found.empty()) {
            if (found.size() > 1) throw std::logic_error("dominant set not unique");
            return found[0];
        }
    }
    throw std::logic_error("no dominant set");
}

namespace detail {

// Does some ordering of `mem` make a descending chain under strict majority?
inline bool subset_is_chain(const Profile& p, std::vector<int> mem) {
    std::sort(mem.begin(), mem.end());
    do {
        bool ok = true;
        for (size_t i = 0; i < mem.size() && ok; ++i)
            for (size_t j = i + 1; j < mem.size() && ok; ++j)
                if (!beats(p, mem[i], mem[j])) ok = false;
        if (ok) return true;
    } while (std::next_permutation(mem.begin(), mem.end()));
    return false;
}

}  // namespace detail

inline WinningSet banks(const Profile& p) {
    std::set<int> tops;
    for (uint32_t s = 1; s < (1u << p.m); ++s) {
        std::vector<int> mem;
        for (int a = 0; a < p.m; ++a)
            if (s & (1u << a)) mem.push_back(a);
        if (!detail::subset_is_chain(p, mem)) continue;
        bool maximal = true;
        for (uint32_t t = 1; t < (1u << p.m); ++t)
            if (t != s && (t & s) == s && detail::subset_is_chain(p, [&] {
                    std::vector<int> tm;
                    for (int a = 0; a < p.m; ++a)
                        if (t & (1u << a)) tm.push_back(a);
                    return tm;
                }()))
                maximal = false;
        if (!maximal) continue;
        for (int a : mem) {
            bool top = true;
            for (int b : mem)
                if (b != a && !beats(p, a, b)) top = false;
            if (top) tops.insert(a);
        }
    }
    return WinningSet(tops.begin(), tops.end());
}

inline WinningSet split_cycle(const Profile& p) {
    const int m = p.m;
    std::vector<std::vector<char>> cut(m, std::vector<char>(m, 0));
    for (int x = 0; x < m; ++x)
        for (int y = 0; y < m; ++y) {
            if (y == x || margin(p, x, y) <= 0) continue;
            // Look for a simple cycle x -> y -> ... -> x in which the x->y
            // defeat is (one of) the weakest.
            for (uint32_t s = 0; s < (1u << m) && !cut[x][y]; ++s) {
                if (!(s & (1u << x)) || !(s & (1u << y))) continue;
                std::vector<int> rest;
                for (int a = 0; a < m; ++a)
                    if ((s & (1u << a)) && a != x && a != y) rest.push_back(a);
                std::sort(rest.begin(), rest.end());
                do {
                    std::vector<int> cyc{x, y};
                    cyc.insert(cyc.end(), rest.begin(), rest.end());
                    int weakest = INT_MAX;
                    bool valid = true;
                    for (size_t i = 0; i < cyc.size(); ++i) {
                        int u = cyc[i], v = cyc[(i + 1) % cyc.size()];
                        if (margin(p, u, v) <= 0) valid = false;
                        weakest = std::min(weakest, margin(p, u, v));
                    }
                    if (valid && margin(p, x, y) == weakest) {
                        cut[x][y] = 1;
                        break;
                    }
                } while (std::next_permutation(rest.begin(), rest.end()));
            }
        }
    WinningSet w;
    for (int x = 0; x < m; ++x) {
        bool defeated = false;
        for (int y = 0; y < m; ++y)
            if (y != x && margin(p, y, x) > 0 && !cut[y][x]) defeated = true;
        if (!defeated) w.push_back(x);
    }
    return w;
}

inline WinningSet stable_voting(const Profile& p) {
    if (p.m == 1) return {0};
    WinningSet sc = split_cycle(p);
    if (sc.size() == 1) return sc;
    int best = INT_MIN;
    std::set<int> win;
    for (int x : sc)
        for (int y = 0; y < p.m; ++y) {
            if (y == x) continue;
            WinningSet sub = stable_voting(votelab::remove_alternative(p, y));
            int xq = x > y ? x - 1 : x;
            if (std::find(sub.begin(), sub.end(), xq) == sub.end()) continue;
            int mar = margin(p, x, y);
            if (mar > best) {
                best = mar;
                win = {x};
            } else if (mar == best) {
                win.insert(x);
            }
        }
    if (win.empty()) return sc;
    return WinningSet(win.begin(), win.end());
}

inline WinningSet blacks(const Profile& p) {
    if (auto cw = condorcet(p)) return {*cw};
    return borda(p);
}

inline WinningSet instant_runoff_tb(const Profile& p) {
    Profile q = p;
    std::vector<int> orig(p.m);
    for (int i = 0; i < p.m; ++i) orig[i] = i;
    while (q.m > 1) {
        std::vector<int> firsts(q.m, 0);
        for (const Ranking& r : q.rankings) ++firsts[r.front()];
        for (int a = 0; a < q.m; ++a)
            if (2 * firsts[a] > q.n()) return {orig[a]};
        int worst = 0;
        for (int a = 1; a < q.m; ++a)
            if (firsts[a] < firsts[worst]) worst = a;
        q = votelab::remove_alternative(q, worst);
        orig.erase(orig.begin() + worst);
    }
    return {orig[0]};
}

inline WinningSet plurality_w_runoff_put(const Profile& p) {
    if (p.m == 1) return {0};
    std::vector<int> firsts(p.m, 0);
    for (const Ranking& r : p.rankings) ++firsts[r.front()];
    for (int a = 0; a < p.m; ++a)
        if (2 * firsts[a] > p.n()) return {a};
    int top = *std::max_element(firsts.begin(), firsts.end());
    std::vector<int> lead;
    for (int a = 0; a < p.m; ++a)
        if (firsts[a] == top) lead.push_back(a);
    std::vector<std::pair<int, int>> duels;
    if (lead.size() > 1) {
        for (size_t i = 0; i < lead.size(); ++i)
            for (size_t j = i + 1; j < lead.size(); ++j) duels.emplace_back(lead[i], lead[j]);
    } else {
        int runner = -1;
        for (int a = 0; a < p.m; ++a)
            if (a != lead[0] && (runner < 0 || firsts[a] > firsts[runner])) runner = a;
        for (int a = 0; a < p.m; ++a)
            if (a != lead[0] && firsts[a] == firsts[runner]) duels.emplace_back(lead[0], a);
    }
    std::set<int> win;
    for (auto [x, y] : duels) {
        if (margin(p, x, y) >= 0) win.insert(x);
        if (margin(p, y, x) >= 0) win.insert(y);
    }
    return WinningSet(win.begin(), win.end());
}

// Shared loop for the elimination family, rebuilding the profile each round.
template <typename ScoreFn, typename PickFn>
WinningSet eliminate(const Profile& p, bool majority_stop, ScoreFn score_of, PickFn pick_out) {
    Profile q = p;
    std::vector<int> orig(p.m);
    for (int i = 0; i < p.m; ++i) orig[i] = i;
    while (q.m > 1) {
        if (majority_stop) {
            std::vector<int> firsts(q.m, 0);
            for (const Ranking& r : q.rankings) ++firsts[r.front()];
            for (int a = 0; a < q.m; ++a)
                if (2 * firsts[a] > q.n()) return {orig[a]};
        }
        std::vector<long long> s = score_of(q);
        std::vector<int> out = pick_out(s);
        if (static_cast<int>(out.size()) == q.m) {
            WinningSet w(orig.begin(), orig.end());
            std::sort(w.begin(), w.end());
            return w;
        }
        std::sort(out.rbegin(), out.rend());
        for (int a : out) {
            q = votelab::remove_alternative(q, a);
            orig.erase(orig.begin() + a);
        }
    }
    return {orig[0]};
}

inline std::vector<int> lowest_of(const std::vector<long long>& s) {
    long long worst = *std::min_element(s.begin(), s.end());
    std::vector<int> out;
    for (int a = 0; a < static_cast<int>(s.size()); ++a)
        if (s[a] == worst) out.push_back(a);
    return out;
}

inline std::vector<long long> borda_vec(const Profile& q) {
    std::vector<long long> s(q.m, 0);
    for (const Ranking& r : q.rankings)
        for (int i = 0; i < q.m; ++i) s[r[i]] += q.m - 1 - i;
    return s;
}

inline WinningSet coombs(const Profile& p) {
    return eliminate(
        p, true,
        [](const Profile& q) {
            std::vector<long long> s(q.m, 0);
            for (const Ranking& r : q.rankings)
                for (int a : r)
                    if (a != r.back()) ++s[a];
            return s;
        },
        lowest_of);
}

inline WinningSet baldwin(const Profile& p) { return eliminate(p, false, borda_vec, lowest_of); }

inline WinningSet weak_nanson(const Profile& p) {
    return eliminate(p, false, borda_vec, [](const std::vector<long long>& s) {
        long long total = 0;
        for (long long v : s) total += v;
        std::vector<int> out;
        // score <= average, compared in integers: m * score <= total
        for (int a = 0; a < static_cast<int>(s.size()); ++a)
            if (static_cast<long long>(s.size()) * s[a] <= total) out.push_back(a);
        return out;
    });
}

// Orders scored by per-voter agreement (pair count minus Kendall tau).
inline WinningSet kemeny_young(const Profile& p) {
    long long best = LLONG_MIN;
    std::set<int> tops;
    const long long pairs = static_cast<long long>(p.m) * (p.m - 1) / 2;
    for (const auto& ord : votelab::all_permutations(p.m)) {
        long long s = 0;
        for (const Ranking& r : p.rankings) s += pairs - votelab::kendall_tau(ord, r);
        if (s > best) {
            best = s;
            tops.clear();
        }
        if (s == best) tops.insert(ord.front());
    }
    return WinningSet(tops.begin(), tops.end());
}

inline WinningSet apply(votelab::RuleId id, const Profile& p) {
    using votelab::RuleId;
    switch (id) {
        case RuleId::plurality: return plurality(p);
        case RuleId::borda: return borda(p);
        case RuleId::anti_plurality: return anti_plurality(p);
        case RuleId::copeland: return copeland(p);
        case RuleId::llull: return llull(p);
        case RuleId::uncovered_set: return uncovered_set(p);
        case RuleId::top_cycle: return top_cycle(p);
        case RuleId::banks: return banks(p);
        case RuleId::stable_voting: return stable_voting(p);
        case RuleId::blacks: return blacks(p);
        case RuleId::instant_runoff_tb: return instant_runoff_tb(p);
        case RuleId::plurality_w_runoff_put: return plurality_w_runoff_put(p);
        case RuleId::coombs: return coombs(p);
        case RuleId::baldwin: return baldwin(p);
        case RuleId::weak_nanson: return weak_nanson(p);
        case RuleId::kemeny_young: return kemeny_young(p);
    }
    throw std::invalid_argument("unknown rule id");
}

}  // namespace oracle
