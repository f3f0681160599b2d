#pragma once

// Core types for preference profiles: rankings, margin matrices,
// Condorcet winners, Kendall tau, relabelings, and the text formats
// used by every tool in this project.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace votelab {

// A strict linear order, most preferred first: r[0] is the top alternative.
using Ranking = std::vector<int>;

// Winners of a rule applied to a profile; always sorted ascending, may be
// empty only for learned functions (every classical rule elects someone).
using WinningSet = std::vector<int>;

struct Profile {
    int m = 0;                      // number of alternatives, labeled 0..m-1
    std::vector<Ranking> rankings;  // one strict ranking per voter

    int n() const { return static_cast<int>(rankings.size()); }
};

inline void validate_ranking(const Ranking& r, int m) {
    if (static_cast<int>(r.size()) != m)
        throw std::invalid_argument("ranking length != m");
    std::vector<char> seen(m, 0);
    for (int a : r) {
        if (a < 0 || a >= m || seen[a])
            throw std::invalid_argument("ranking is not a permutation of 0..m-1");
        seen[a] = 1;
    }
}

inline void validate_profile(const Profile& p) {
    if (p.m < 1) throw std::invalid_argument("profile needs at least one alternative");
    if (p.rankings.empty()) throw std::invalid_argument("profile needs at least one voter");
    for (const Ranking& r : p.rankings) validate_ranking(r, p.m);
}

// positions[a] = rank of alternative a in r (0 = top).
inline std::vector<int> rank_positions(const Ranking& r) {
    std::vector<int> pos(r.size());
    for (int i = 0; i < static_cast<int>(r.size()); ++i) pos[r[i]] = i;
    return pos;
}

// Pairwise support counts: (x,y) -> number of voters ranking x above y.
class MarginMatrix {
public:
    MarginMatrix() = default;
    explicit MarginMatrix(const Profile& p)
        : m_(p.m), n_(p.n()), c_(size_t(p.m) * p.m, 0) {
        for (const Ranking& r : p.rankings)
            for (int i = 0; i < p.m; ++i)
                for (int j = i + 1; j < p.m; ++j) ++at(r[i], r[j]);
    }

    int m() const { return m_; }
    int n() const { return n_; }
    int operator()(int x, int y) const { return c_[size_t(x) * m_ + y]; }

    // x beats y by strict majority.
    bool beats(int x, int y) const { return (*this)(x, y) > (*this)(y, x); }
    bool ties(int x, int y) const { return (*this)(x, y) == (*this)(y, x); }
    // Every voter ranks x above y.
    bool unanimous(int x, int y) const { return (*this)(x, y) == n_; }

private:
    int& at(int x, int y) { return c_[size_t(x) * m_ + y]; }
    int m_ = 0;
    int n_ = 0;
    std::vector<int> c_;
};

// All ordered pairs (x, y) with every voter ranking x above y.
inline std::vector<std::pair<int, int>> unanimous_pairs(const MarginMatrix& mm) {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < mm.m(); ++x)
        for (int y = 0; y < mm.m(); ++y)
            if (x != y && mm.unanimous(x, y)) out.emplace_back(x, y);
    return out;
}

// The alternative beating every other by strict majority, if it exists.
inline std::optional<int> condorcet_winner(const MarginMatrix& mm) {
    for (int x = 0; x < mm.m(); ++x) {
        bool all = true;
        for (int y = 0; y < mm.m() && all; ++y)
            if (y != x && !mm.beats(x, y)) all = false;
        if (all) return x;
    }
    return std::nullopt;
}

inline std::optional<int> condorcet_winner(const Profile& p) {
    return condorcet_winner(MarginMatrix(p));
}

// Number of discordant pairs between two rankings over the same alternatives.
inline int kendall_tau(const Ranking& a, const Ranking& b) {
    const int m = static_cast<int>(a.size());
    std::vector<int> pb = rank_positions(b);
    int d = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (pb[a[i]] > pb[a[j]]) ++d;
    return d;
}

// Relabel alternatives: a becomes sigma[a].
inline Ranking permute_alternatives(const Ranking& r, const std::vector<int>& sigma) {
    Ranking out(r.size());
    for (size_t i = 0; i < r.size(); ++i) out[i] = sigma[r[i]];
    return out;
}

inline Profile permute_alternatives(const Profile& p, const std::vector<int>& sigma) {
    Profile out;
    out.m = p.m;
    out.rankings.reserve(p.rankings.size());
    for (const Ranking& r : p.rankings) out.rankings.push_back(permute_alternatives(r, sigma));
    return out;
}

// Reorder voters: new voter i is old voter tau[i].
inline Profile permute_voters(const Profile& p, const std::vector<int>& tau) {
    Profile out;
    out.m = p.m;
    out.rankings.reserve(p.rankings.size());
    for (int i : tau) out.rankings.push_back(p.rankings.at(i));
    return out;
}

inline WinningSet permute_winners(const WinningSet& w, const std::vector<int>& sigma) {
    WinningSet out;
    out.reserve(w.size());
    for (int a : w) out.push_back(sigma[a]);
    std::sort(out.begin(), out.end());
    return out;
}

// Drop one alternative and renumber the rest, preserving order: labels above
// `removed` shift down by one.
inline Profile remove_alternative(const Profile& p, int removed) {
    Profile out;
    out.m = p.m - 1;
    out.rankings.reserve(p.rankings.size());
    for (const Ranking& r : p.rankings) {
        Ranking s;
        s.reserve(r.size() - 1);
        for (int a : r)
            if (a != removed) s.push_back(a > removed ? a - 1 : a);
        out.rankings.push_back(std::move(s));
    }
    return out;
}

// --- text formats ------------------------------------------------------
//
// Profile line:  m;n;r_1|r_2|...|r_n   with each r_i a comma-separated
// ranking, most preferred first. Example: 4;2;2,0,1,3|3,1,2,0

inline std::string format_ranking(const Ranking& r) {
    std::string s;
    for (size_t i = 0; i < r.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(r[i]);
    }
    return s;
}

inline std::string format_profile(const Profile& p) {
    std::string s = std::to_string(p.m) + ";" + std::to_string(p.n()) + ";";
    for (size_t i = 0; i < p.rankings.size(); ++i) {
        if (i) s += '|';
        s += format_ranking(p.rankings[i]);
    }
    return s;
}

inline std::string format_winning_set(const WinningSet& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline int parse_int(const std::string& s) {
    size_t pos = 0;
    int v;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("expected integer, got '" + s + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("trailing junk in integer '" + s + "'");
    return v;
}

}  // namespace detail

inline Ranking parse_ranking(const std::string& s) {
    Ranking r;
    for (const std::string& tok : detail::split(s, ',')) r.push_back(detail::parse_int(tok));
    return r;
}

inline WinningSet parse_winning_set(const std::string& s) {
    WinningSet w;
    if (s.empty()) return w;
    for (const std::string& tok : detail::split(s, ',')) w.push_back(detail::parse_int(tok));
    if (!std::is_sorted(w.begin(), w.end())) throw std::invalid_argument("winning set not sorted");
    return w;
}

inline Profile parse_profile(const std::string& line) {
    auto fields = detail::split(line, ';');
    if (fields.size() != 3) throw std::invalid_argument("profile line needs 3 ';'-fields");
    Profile p;
    p.m = detail::parse_int(fields[0]);
    int n = detail::parse_int(fields[1]);
    for (const std::string& rs : detail::split(fields[2], '|'))
        p.rankings.push_back(parse_ranking(rs));
    if (p.n() != n) throw std::invalid_argument("voter count field disagrees with rankings");
    validate_profile(p);
    return p;
}

// FNV-1a over the profile's shape and rankings; stable across runs, used to
// derive per-profile random streams.
inline uint64_t hash_profile(const Profile& p) {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(static_cast<uint64_t>(p.m));
    mix(static_cast<uint64_t>(p.n()));
    for (const Ranking& r : p.rankings)
        for (int a : r) mix(static_cast<uint64_t>(a) + 1);
    return h;
}

// All permutations of 0..m-1 in lexicographic order (m! of them; m <= 7 here).
inline std::vector<std::vector<int>> all_permutations(int m) {
    std::vector<int> base(m);
    for (int i = 0; i < m; ++i) base[i] = i;
    std::vector<std::vector<int>> out;
    do out.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
    return out;
}

inline int64_t factorial(int m) {
    int64_t f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

}  // namespace votelab
