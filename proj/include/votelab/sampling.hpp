#pragma once

// Seeded randomness and the four profile distributions. All sampling goes
// through Rng so that every experiment is reproducible from a single seed;
// the variate transforms are fixed here rather than taken from <random>'s
// distribution classes, whose output is implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>

#include "votelab/core.hpp"

namespace votelab {

inline constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent stream for a labeled sub-task of a seeded run.
inline constexpr uint64_t derive_seed(uint64_t base, uint64_t salt) {
    return splitmix64(base ^ splitmix64(salt));
}

class Rng {
public:
    explicit Rng(uint64_t seed) : seed_(seed), eng_(seed) {}

    uint64_t seed() const { return seed_; }
    uint64_t raw() { return eng_(); }

    // [0, 1), 53-bit resolution.
    double uniform01() { return double(raw() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, k).
    uint64_t below(uint64_t k) {
        if (k == 0) throw std::invalid_argument("below(0)");
        uint64_t reject = (0 - k) % k;  // 2^64 mod k
        uint64_t x;
        do x = raw();
        while (x < reject);
        return x % k;
    }
    int below_int(int k) { return static_cast<int>(below(static_cast<uint64_t>(k))); }

    // Standard normal via Box-Muller (pairs cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Gamma(shape, 1) via Marsaglia-Tsang, with the boost for shape < 1.
    double gamma(double shape) {
        if (shape <= 0) throw std::invalid_argument("gamma shape must be positive");
        if (shape < 1.0) {
            double u = 1.0 - uniform01();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = 1.0 - uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Deterministic independent child stream.
    Rng fork(uint64_t salt) const { return Rng(derive_seed(seed_, salt)); }

private:
    uint64_t seed_;
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class Distribution { ic, mallows, urn_r, euclidean };

inline const char* to_string(Distribution d) {
    switch (d) {
        case Distribution::ic: return "ic";
        case Distribution::mallows: return "mallows";
        case Distribution::urn_r: return "urn_r";
        case Distribution::euclidean: return "euclidean";
    }
    throw std::invalid_argument("unknown distribution");
}

inline Distribution distribution_from_string(const std::string& s) {
    for (Distribution d : {Distribution::ic, Distribution::mallows, Distribution::urn_r,
                           Distribution::euclidean})
        if (s == to_string(d)) return d;
    throw std::invalid_argument("unknown distribution '" + s +
                                "' (expected ic, mallows, urn_r, or euclidean)");
}

inline const std::array<Distribution, 4>& all_distributions() {
    static const std::array<Distribution, 4> d = {Distribution::ic, Distribution::mallows,
                                                  Distribution::urn_r, Distribution::euclidean};
    return d;
}

// Uniformly random strict ranking (Fisher-Yates).
inline Ranking sample_ranking_ic(Rng& rng, int m) {
    Ranking r(m);
    for (int i = 0; i < m; ++i) r[i] = i;
    for (int i = m - 1; i > 0; --i) std::swap(r[i], r[rng.below_int(i + 1)]);
    return r;
}

// --- Mallows ---------------------------------------------------------------

// Expected Kendall tau of a Mallows draw from its reference ranking.
inline double mallows_expected_kt(double phi, int m) {
    double e = 0.0;
    for (int j = 1; j < m; ++j) {
        double num = 0.0, den = 0.0, pw = 1.0;
        for (int t = 0; t <= j; ++t) {
            num += t * pw;
            den += pw;
            pw *= phi;
        }
        e += num / den;
    }
    return e;
}

// Dispersion phi whose expected normalized distance matches rel in (0, 1]:
// rel = 1 is uniform (phi = 1), rel -> 0 concentrates on the reference.
inline double mallows_phi_for_rel(double rel, int m) {
    if (rel <= 0.0 || rel > 1.0) throw std::invalid_argument("rel-phi must be in (0,1]");
    if (rel == 1.0 || m < 2) return 1.0;
    const double target = rel * m * (m - 1) / 4.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (mallows_expected_kt(mid, m) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Repeated-insertion sampling: the j-th reference item lands t slots above
// the bottom of the partial order with probability proportional to phi^t.
inline Ranking sample_mallows(Rng& rng, const Ranking& ref, double phi) {
    const int m = static_cast<int>(ref.size());
    Ranking cur;
    cur.reserve(m);
    for (int j = 0; j < m; ++j) {
        int t = 0;
        if (j > 0) {
            double total = 0.0, pw = 1.0;
            for (int i = 0; i <= j; ++i) {
                total += pw;
                pw *= phi;
            }
            double u = rng.uniform01() * total;
            pw = 1.0;
            while (t < j && u >= pw) {
                u -= pw;
                pw *= phi;
                ++t;
            }
        }
        cur.insert(cur.begin() + (j - t), ref[j]);
    }
    return cur;
}

// --- Polya urn --------------------------------------------------------------

// Urn with contagion alpha: each ballot is either copied from a uniformly
// chosen earlier ballot (weight k*alpha after k draws) or drawn fresh.
inline Profile sample_urn(Rng& rng, int m, int n, double alpha) {
    Profile p;
    p.m = m;
    p.rankings.reserve(n);
    for (int k = 0; k < n; ++k) {
        bool copy = false;
        if (k > 0 && alpha > 0.0) copy = rng.uniform01() < (k * alpha) / (1.0 + k * alpha);
        if (copy)
            p.rankings.push_back(p.rankings[rng.below_int(k)]);
        else
            p.rankings.push_back(sample_ranking_ic(rng, m));
    }
    return p;
}

// --- Euclidean ---------------------------------------------------------------

struct Point {
    double x = 0.0, y = 0.0;
};

struct EuclideanSample {
    std::vector<Point> alternatives;
    std::vector<Point> voters;
    Profile profile;
};

// Alternatives then voters drawn uniformly on the unit square; each voter
// ranks by distance, nearest first, equal distances by alternative index.
inline EuclideanSample sample_euclidean_detailed(Rng& rng, int m, int n) {
    EuclideanSample s;
    s.alternatives.reserve(m);
    for (int a = 0; a < m; ++a) {
        double x = rng.uniform01(), y = rng.uniform01();
        s.alternatives.push_back({x, y});
    }
    s.voters.reserve(n);
    s.profile.m = m;
    for (int v = 0; v < n; ++v) {
        double x = rng.uniform01(), y = rng.uniform01();
        s.voters.push_back({x, y});
        Ranking r(m);
        for (int a = 0; a < m; ++a) r[a] = a;
        std::sort(r.begin(), r.end(), [&](int a, int b) {
            double dxa = s.alternatives[a].x - x, dya = s.alternatives[a].y - y;
            double dxb = s.alternatives[b].x - x, dyb = s.alternatives[b].y - y;
            double da = dxa * dxa + dya * dya, db = dxb * dxb + dyb * dyb;
            return da < db || (da == db && a < b);
        });
        s.profile.rankings.push_back(std::move(r));
    }
    return s;
}

inline Profile sample_euclidean(Rng& rng, int m, int n) {
    return sample_euclidean_detailed(rng, m, n).profile;
}

// --- profile sampling --------------------------------------------------------

struct SampleSpec {
    int m_min = 1, m_max = 5;
    int n_min = 1, n_max = 55;
    Distribution dist = Distribution::ic;
    std::optional<double> mallows_rel_phi;  // fixed dispersion; fresh U(0,1] per profile when unset
};

inline void validate(const SampleSpec& s) {
    if (s.m_min < 1 || s.m_min > s.m_max) throw std::invalid_argument("bad alternative range");
    if (s.n_min < 1 || s.n_min > s.n_max) throw std::invalid_argument("bad voter range");
    if (s.mallows_rel_phi && (*s.mallows_rel_phi <= 0.0 || *s.mallows_rel_phi > 1.0))
        throw std::invalid_argument("rel-phi must be in (0,1]");
}

// Sizes first (voters, then alternatives), then distribution parameters,
// then ballots; the draw order is part of the reproducibility contract.
inline Profile sample_profile(Rng& rng, const SampleSpec& spec) {
    validate(spec);
    const int n = spec.n_min + rng.below_int(spec.n_max - spec.n_min + 1);
    const int m = spec.m_min + rng.below_int(spec.m_max - spec.m_min + 1);
    switch (spec.dist) {
        case Distribution::ic: {
            Profile p;
            p.m = m;
            p.rankings.reserve(n);
            for (int v = 0; v < n; ++v) p.rankings.push_back(sample_ranking_ic(rng, m));
            return p;
        }
        case Distribution::mallows: {
            double rel = spec.mallows_rel_phi ? *spec.mallows_rel_phi : 1.0 - rng.uniform01();
            double phi = mallows_phi_for_rel(rel, m);
            Ranking ref = sample_ranking_ic(rng, m);
            Profile p;
            p.m = m;
            p.rankings.reserve(n);
            for (int v = 0; v < n; ++v) p.rankings.push_back(sample_mallows(rng, ref, phi));
            return p;
        }
        case Distribution::urn_r: {
            double alpha = rng.gamma(0.8);
            return sample_urn(rng, m, n, alpha);
        }
        case Distribution::euclidean: return sample_euclidean(rng, m, n);
    }
    throw std::invalid_argument("unknown distribution");
}

}  // namespace votelab
