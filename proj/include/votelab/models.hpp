#pragma once

// Neural voting models: profile encoders, three architectures (MLP, CNN,
// ranking-embedding WEC), winner decoders, and a binary checkpoint format.
//
// All three nets map a profile with m <= m_max alternatives and n <= n_max
// voters to m_max logits; coordinate a is the score for electing alternative
// a, and everything past the profile's own m is ignored by decoders and
// losses.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "votelab/autodiff.hpp"
#include "votelab/core.hpp"
#include "votelab/nn.hpp"
#include "votelab/rules.hpp"
#include "votelab/sampling.hpp"

namespace votelab {

// --- ranking tokens ----------------------------------------------------------
//
// The WEC model treats each ballot as one token. Id 0 is padding, id 1 is
// unknown; then every strict ranking of k = 1..m_max alternatives, ordered by
// k and lexicographically within k. The vocabulary is the full enumeration,
// so unknown only covers rankings longer than m_max.

constexpr int kPadToken = 0;
constexpr int kUnkToken = 1;

inline int64_t vocab_size(int m_max) {
    int64_t s = 2;
    for (int k = 1; k <= m_max; ++k) s += factorial(k);
    return s;
}

inline int ranking_token(const Ranking& r, int m_max) {
    const int m = static_cast<int>(r.size());
    if (m < 1 || m > m_max) return kUnkToken;
    int64_t off = 2;
    for (int k = 1; k < m; ++k) off += factorial(k);
    // Lehmer code: digit i counts later entries smaller than r[i]
    int64_t idx = 0;
    for (int i = 0; i < m; ++i) {
        int c = 0;
        for (int j = i + 1; j < m; ++j)
            if (r[j] < r[i]) ++c;
        idx += c * factorial(m - 1 - i);
    }
    return static_cast<int>(off + idx);
}

inline Ranking token_ranking(int token, int m_max) {
    if (token < 2 || token >= vocab_size(m_max))
        throw std::invalid_argument("token_ranking: not a ranking token");
    int64_t idx = token - 2;
    int m = 1;
    while (idx >= factorial(m)) {
        idx -= factorial(m);
        ++m;
    }
    std::vector<int> pool(m);
    for (int i = 0; i < m; ++i) pool[i] = i;
    Ranking r(m);
    for (int i = 0; i < m; ++i) {
        const int64_t f = factorial(m - 1 - i);
        const int c = static_cast<int>(idx / f);
        idx %= f;
        r[i] = pool[c];
        pool.erase(pool.begin() + c);
    }
    return r;
}

// Per-voter tokens in ascending token order. Sorting fixes the summation
// order downstream, which makes the WEC forward pass independent of voter
// order down to the last bit.
inline std::vector<int> encode_tokens(const Profile& p, int m_max) {
    std::vector<int> ids;
    ids.reserve(p.rankings.size());
    for (const Ranking& r : p.rankings) ids.push_back(ranking_token(r, m_max));
    std::sort(ids.begin(), ids.end());
    return ids;
}

// One-hot tensor [m_max, m_max, n_max]: channel a, row i, column v is 1 when
// voter v ranks alternative a at position i. Unused channels/rows/columns
// stay zero.
inline nn::Tensor encode_onehot(const Profile& p, int m_max, int n_max) {
    nn::Tensor x({m_max, m_max, n_max});
    const int n = p.n();
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < p.m; ++i) {
            const int a = p.rankings[v][i];
            x[(size_t(a) * m_max + i) * n_max + v] = 1.0;
        }
    return x;
}

// --- voter reordering --------------------------------------------------------
//
// Optional preprocessing that arranges similar ballots next to each other so
// the convolution's voter-axis kernel sees locally coherent input. "global"
// sorts voters by Kendall tau distance to voter 0; "local" grows a chain,
// each time appending the remaining voter closest to the last one picked.
// Ties break toward the lower original index; default is off.

enum class KtReorder { off, global, local };

inline std::string to_string(KtReorder k) {
    switch (k) {
        case KtReorder::off: return "off";
        case KtReorder::global: return "global";
        case KtReorder::local: return "local";
    }
    throw std::logic_error("bad KtReorder");
}

inline KtReorder kt_reorder_from_string(const std::string& s) {
    if (s == "off") return KtReorder::off;
    if (s == "global") return KtReorder::global;
    if (s == "local") return KtReorder::local;
    throw std::invalid_argument("unknown kt reorder mode: " + s);
}

inline Profile reorder_voters(const Profile& p, KtReorder mode) {
    const int n = p.n();
    if (mode == KtReorder::off || n <= 1) return p;
    std::vector<int> order;
    if (mode == KtReorder::global) {
        std::vector<std::pair<int, int>> keyed(n);
        for (int v = 0; v < n; ++v) keyed[v] = {kendall_tau(p.rankings[v], p.rankings[0]), v};
        std::sort(keyed.begin(), keyed.end());
        for (auto& [d, v] : keyed) order.push_back(v);
    } else {
        std::vector<bool> used(n, false);
        order.push_back(0);
        used[0] = true;
        while (static_cast<int>(order.size()) < n) {
            const Ranking& last = p.rankings[order.back()];
            int best = -1, best_d = 0;
            for (int v = 0; v < n; ++v) {
                if (used[v]) continue;
                const int d = kendall_tau(last, p.rankings[v]);
                if (best < 0 || d < best_d) {
                    best = v;
                    best_d = d;
                }
            }
            used[best] = true;
            order.push_back(best);
        }
    }
    Profile q;
    q.m = p.m;
    q.rankings.reserve(n);
    for (int v : order) q.rankings.push_back(p.rankings[v]);
    return q;
}

// --- model -------------------------------------------------------------------

enum class Architecture { mlp, cnn, wec };

inline std::string to_string(Architecture a) {
    switch (a) {
        case Architecture::mlp: return "mlp";
        case Architecture::cnn: return "cnn";
        case Architecture::wec: return "wec";
    }
    throw std::logic_error("bad Architecture");
}

inline Architecture architecture_from_string(const std::string& s) {
    if (s == "mlp") return Architecture::mlp;
    if (s == "cnn") return Architecture::cnn;
    if (s == "wec") return Architecture::wec;
    throw std::invalid_argument("unknown architecture: " + s);
}

struct ModelConfig {
    Architecture arch = Architecture::mlp;
    int m_max = 5;
    int n_max = 55;
    int hidden = 128;
    int hidden_layers = 2;   // MLP depth; CNN/WEC always use two hidden layers
    bool layer_norm = false; // MLP only: LayerNorm between linear and relu
    int cnn_channels = 0;    // 0 = auto: 32 up to 5 alternatives, 64 beyond
    int embedding_dim = 0;   // 0 = auto: 100 up to 5 alternatives, 200 beyond
    KtReorder kt_reorder = KtReorder::off;

    ModelConfig resolved() const {
        ModelConfig c = *this;
        if (c.cnn_channels == 0) c.cnn_channels = c.m_max <= 5 ? 32 : 64;
        if (c.embedding_dim == 0) c.embedding_dim = c.m_max <= 5 ? 100 : 200;
        return c;
    }
};

class Model {
public:
    Model(const ModelConfig& cfg, uint64_t seed) : cfg_(cfg.resolved()) {
        if (cfg_.m_max < 1 || cfg_.n_max < 1 || cfg_.hidden < 1 || cfg_.hidden_layers < 1)
            throw std::invalid_argument("bad model config");
        if (cfg_.arch == Architecture::cnn && (cfg_.m_max < 5 || cfg_.n_max < 5))
            throw std::invalid_argument("cnn needs m_max and n_max of at least 5");
        Rng rng(derive_seed(seed, 0x4D4F44454C));  // "MODEL"
        switch (cfg_.arch) {
            case Architecture::mlp: {
                int in = cfg_.m_max * cfg_.m_max * cfg_.n_max;
                for (int l = 0; l < cfg_.hidden_layers; ++l) {
                    add_linear("fc" + std::to_string(l), cfg_.hidden, in, rng);
                    if (cfg_.layer_norm) add_layer_norm("ln" + std::to_string(l), cfg_.hidden);
                    in = cfg_.hidden;
                }
                add_linear("out", cfg_.m_max, in, rng);
                break;
            }
            case Architecture::cnn: {
                const int ch = cfg_.cnn_channels;
                add_conv("conv1", ch, cfg_.m_max, 5, 1, rng);
                add_conv("conv2", ch, ch, 1, 5, rng);
                const int flat = ch * (cfg_.m_max - 4) * (cfg_.n_max - 4);
                add_linear("fc0", cfg_.hidden, flat, rng);
                add_linear("fc1", cfg_.hidden, cfg_.hidden, rng);
                add_linear("out", cfg_.m_max, cfg_.hidden, rng);
                break;
            }
            case Architecture::wec: {
                const int V = static_cast<int>(vocab_size(cfg_.m_max));
                nn::Tensor e({V, cfg_.embedding_dim});
                const double half = 0.5 / double(cfg_.embedding_dim);
                nn::init_uniform(e, rng, -half, half);
                for (int d = 0; d < cfg_.embedding_dim; ++d) e[d] = 0.0;  // pad row
                add_param("embedding.weight", std::move(e));
                add_linear("fc0", cfg_.hidden, cfg_.embedding_dim, rng);
                add_linear("fc1", cfg_.hidden, cfg_.hidden, rng);
                add_linear("out", cfg_.m_max, cfg_.hidden, rng);
                break;
            }
        }
    }

    // Copying would alias the parameter nodes; clone() is the deep copy.
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;
    Model(Model&&) = default;
    Model& operator=(Model&&) = default;

    const ModelConfig& config() const { return cfg_; }
    const std::vector<nn::NodePtr>& parameters() const { return params_; }
    const std::vector<std::string>& parameter_names() const { return names_; }

    int64_t parameter_count() const {
        int64_t c = 0;
        for (const auto& p : params_) c += p->val.size();
        return c;
    }

    nn::NodePtr find_parameter(const std::string& name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return params_[i];
        throw std::invalid_argument("no parameter named " + name);
    }

    // Overwrite the embedding table (row-major [vocab, dim]); the padding row
    // is forced back to zero. Used to install word2vec-pretrained vectors.
    void set_embedding_rows(const std::vector<double>& rows) {
        nn::NodePtr e = find_parameter("embedding.weight");
        if (static_cast<int64_t>(rows.size()) != e->val.size())
            throw std::invalid_argument("embedding size mismatch");
        e->val.v = rows;
        for (int d = 0; d < cfg_.embedding_dim; ++d) e->val[d] = 0.0;
    }

    nn::NodePtr logits(const Profile& p) const {
        validate_profile(p);
        if (p.m > cfg_.m_max || p.n() > cfg_.n_max)
            throw std::invalid_argument("profile exceeds model capacity");
        using namespace nn;
        switch (cfg_.arch) {
            case Architecture::mlp: {
                const Profile q = reorder_voters(p, cfg_.kt_reorder);
                Tensor flat({cfg_.m_max * cfg_.m_max * cfg_.n_max});
                flat.v = encode_onehot(q, cfg_.m_max, cfg_.n_max).v;
                NodePtr h = value(std::move(flat));
                size_t k = 0;
                for (int l = 0; l < cfg_.hidden_layers; ++l) {
                    h = linear(params_[k], params_[k + 1], h);
                    k += 2;
                    if (cfg_.layer_norm) {
                        h = layer_norm(h, params_[k], params_[k + 1]);
                        k += 2;
                    }
                    h = relu(h);
                }
                return linear(params_[k], params_[k + 1], h);
            }
            case Architecture::cnn: {
                const Profile q = reorder_voters(p, cfg_.kt_reorder);
                NodePtr x = value(encode_onehot(q, cfg_.m_max, cfg_.n_max));
                NodePtr c = relu(conv2d(params_[0], params_[1], x));
                c = relu(conv2d(params_[2], params_[3], c));
                NodePtr h = relu(linear(params_[4], params_[5], flatten(c)));
                h = relu(linear(params_[6], params_[7], h));
                return linear(params_[8], params_[9], h);
            }
            case Architecture::wec: {
                NodePtr e = embedding_mean(params_[0], encode_tokens(p, cfg_.m_max));
                NodePtr h = relu(linear(params_[1], params_[2], e));
                h = relu(linear(params_[3], params_[4], h));
                return linear(params_[5], params_[6], h);
            }
        }
        throw std::logic_error("bad architecture");
    }

    // Forward pass without building a graph.
    std::vector<double> logits_values(const Profile& p) const {
        nn::NoGradGuard guard;
        return logits(p)->val.v;
    }

    // Deep copy: fresh parameter nodes with identical values.
    Model clone() const {
        Model m(cfg_, 0);
        for (size_t i = 0; i < params_.size(); ++i) m.params_[i]->val = params_[i]->val;
        return m;
    }

private:
    void add_param(const std::string& name, nn::Tensor t) {
        names_.push_back(name);
        params_.push_back(nn::parameter(std::move(t)));
    }
    void add_linear(const std::string& name, int out, int in, Rng& rng) {
        nn::Tensor w({out, in}), b({out});
        nn::init_fan_in(w, b, in, rng);
        add_param(name + ".weight", std::move(w));
        add_param(name + ".bias", std::move(b));
    }
    void add_conv(const std::string& name, int oc, int ic, int kh, int kw, Rng& rng) {
        nn::Tensor w({oc, ic, kh, kw}), b({oc});
        nn::init_fan_in(w, b, ic * kh * kw, rng);
        add_param(name + ".weight", std::move(w));
        add_param(name + ".bias", std::move(b));
    }
    void add_layer_norm(const std::string& name, int dim) {
        nn::Tensor g({dim}), b({dim});
        for (int i = 0; i < dim; ++i) g[i] = 1.0;
        add_param(name + ".gain", std::move(g));
        add_param(name + ".bias", std::move(b));
    }

    ModelConfig cfg_;
    std::vector<nn::NodePtr> params_;
    std::vector<std::string> names_;
};

// --- decoders ----------------------------------------------------------------

enum class DecoderKind { plain, navg, naavg };

inline std::string to_string(DecoderKind d) {
    switch (d) {
        case DecoderKind::plain: return "plain";
        case DecoderKind::navg: return "navg";
        case DecoderKind::naavg: return "naavg";
    }
    throw std::logic_error("bad DecoderKind");
}

inline DecoderKind decoder_from_string(const std::string& s) {
    if (s == "plain") return DecoderKind::plain;
    if (s == "navg") return DecoderKind::navg;
    if (s == "naavg") return DecoderKind::naavg;
    throw std::invalid_argument("unknown decoder: " + s);
}

// Threshold at probability 1/2, i.e. logit 0. Unlike a voting rule the
// decoded set can be empty.
inline WinningSet decode_plain(const std::vector<double>& logits, int m) {
    WinningSet w;
    for (int a = 0; a < m; ++a)
        if (logits[a] > 0.0) w.push_back(a);
    return w;
}

// Average the de-permuted logits over every relabeling of the alternatives.
// Each coordinate sums the same multiset of numbers whichever labeling the
// caller started from; sorting before summation makes the float sum equal
// bitwise, so the decoded set is exactly neutral.
inline std::vector<double> neutral_logits(const Model& model, const Profile& p) {
    const auto perms = all_permutations(p.m);
    std::vector<std::vector<double>> coord(p.m);
    for (auto& c : coord) c.reserve(perms.size());
    for (const auto& sigma : perms) {
        const auto v = model.logits_values(permute_alternatives(p, sigma));
        for (int r = 0; r < p.m; ++r) coord[r].push_back(v[sigma[r]]);
    }
    std::vector<double> avg(p.m);
    for (int r = 0; r < p.m; ++r) {
        std::sort(coord[r].begin(), coord[r].end());
        double s = 0;
        for (double x : coord[r]) s += x;
        avg[r] = s / double(perms.size());
    }
    return avg;
}

// Sampled variant that symmetrizes over both axes: random alternative
// relabelings crossed with random voter permutations.
inline std::vector<double> sampled_symmetric_logits(const Model& model, const Profile& p,
                                                    Rng& rng, int alt_perms = 12,
                                                    int voter_perms = 10) {
    const int n = p.n();
    std::vector<Ranking> sigmas, taus;
    for (int i = 0; i < alt_perms; ++i) sigmas.push_back(sample_ranking_ic(rng, p.m));
    for (int j = 0; j < voter_perms; ++j) taus.push_back(sample_ranking_ic(rng, n));
    std::vector<double> avg(p.m, 0.0);
    for (const auto& tau : taus) {
        const Profile pv = permute_voters(p, tau);
        for (const auto& sigma : sigmas) {
            const auto v = model.logits_values(permute_alternatives(pv, sigma));
            for (int r = 0; r < p.m; ++r) avg[r] += v[sigma[r]];
        }
    }
    for (double& x : avg) x /= double(alt_perms) * double(voter_perms);
    return avg;
}

// Wrap a model + decoder as a voting function. naavg derives its permutation
// stream from the profile content, so the wrapper is deterministic per
// profile and safe to call in any order.
inline VotingFunction make_voting_function(std::shared_ptr<const Model> model, DecoderKind kind,
                                           uint64_t seed = 0, int alt_perms = 12,
                                           int voter_perms = 10) {
    switch (kind) {
        case DecoderKind::plain:
            return [model](const Profile& p) { return decode_plain(model->logits_values(p), p.m); };
        case DecoderKind::navg:
            return [model](const Profile& p) { return decode_plain(neutral_logits(*model, p), p.m); };
        case DecoderKind::naavg:
            return [model, seed, alt_perms, voter_perms](const Profile& p) {
                Rng rng(derive_seed(seed, hash_profile(p)));
                return decode_plain(
                    sampled_symmetric_logits(*model, p, rng, alt_perms, voter_perms), p.m);
            };
    }
    throw std::logic_error("bad DecoderKind");
}

// --- checkpoints ---------------------------------------------------------------
//
// Binary little-endian container, magic "VLCK". Stores free-form metadata,
// the resolved model configuration, the WEC token listing (as a
// self-description), and every tensor as f32.

namespace ckpt {

static_assert(std::endian::native == std::endian::little, "checkpoint io assumes little-endian");

inline void put_u32(std::ostream& os, uint32_t x) {
    os.write(reinterpret_cast<const char*>(&x), 4);
}
inline void put_i32(std::ostream& os, int32_t x) {
    os.write(reinterpret_cast<const char*>(&x), 4);
}
inline void put_str(std::ostream& os, const std::string& s) {
    put_u32(os, static_cast<uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}
inline uint32_t get_u32(std::istream& is) {
    uint32_t x;
    is.read(reinterpret_cast<char*>(&x), 4);
    if (!is) throw std::runtime_error("truncated checkpoint");
    return x;
}
inline int32_t get_i32(std::istream& is) {
    int32_t x;
    is.read(reinterpret_cast<char*>(&x), 4);
    if (!is) throw std::runtime_error("truncated checkpoint");
    return x;
}
inline std::string get_str(std::istream& is) {
    const uint32_t len = get_u32(is);
    if (len > (1u << 24)) throw std::runtime_error("corrupt checkpoint string");
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw std::runtime_error("truncated checkpoint");
    return s;
}

inline std::string token_label(int token, int m_max) {
    if (token == kPadToken) return "pad";
    if (token == kUnkToken) return "unk";
    return format_ranking(token_ranking(token, m_max));
}

}  // namespace ckpt

inline void save_model(const Model& model, const std::string& path,
                       const std::map<std::string, std::string>& metadata = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    const ModelConfig& c = model.config();
    os.write("VLCK", 4);
    ckpt::put_u32(os, 1);
    ckpt::put_u32(os, static_cast<uint32_t>(metadata.size()));
    for (const auto& [k, v] : metadata) {
        ckpt::put_str(os, k);
        ckpt::put_str(os, v);
    }
    ckpt::put_str(os, to_string(c.arch));
    ckpt::put_str(os, to_string(c.kt_reorder));
    ckpt::put_i32(os, c.m_max);
    ckpt::put_i32(os, c.n_max);
    ckpt::put_i32(os, c.hidden);
    ckpt::put_i32(os, c.hidden_layers);
    ckpt::put_i32(os, c.cnn_channels);
    ckpt::put_i32(os, c.embedding_dim);
    os.put(c.layer_norm ? 1 : 0);
    if (c.arch == Architecture::wec) {
        const int V = static_cast<int>(vocab_size(c.m_max));
        ckpt::put_u32(os, static_cast<uint32_t>(V));
        for (int t = 0; t < V; ++t) ckpt::put_str(os, ckpt::token_label(t, c.m_max));
    } else {
        ckpt::put_u32(os, 0);
    }
    const auto& params = model.parameters();
    const auto& names = model.parameter_names();
    ckpt::put_u32(os, static_cast<uint32_t>(params.size()));
    for (size_t i = 0; i < params.size(); ++i) {
        ckpt::put_str(os, names[i]);
        const nn::Tensor& t = params[i]->val;
        ckpt::put_u32(os, static_cast<uint32_t>(t.shape.size()));
        for (int d : t.shape) ckpt::put_i32(os, d);
        std::vector<float> buf(t.v.begin(), t.v.end());
        os.write(reinterpret_cast<const char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size() * 4));
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline Model load_model(const std::string& path,
                        std::map<std::string, std::string>* metadata_out = nullptr) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "VLCK", 4) != 0)
        throw std::runtime_error("not a model checkpoint: " + path);
    if (ckpt::get_u32(is) != 1) throw std::runtime_error("unsupported checkpoint version");
    const uint32_t nmeta = ckpt::get_u32(is);
    for (uint32_t i = 0; i < nmeta; ++i) {
        std::string k = ckpt::get_str(is);
        std::string v = ckpt::get_str(is);
        if (metadata_out) (*metadata_out)[k] = v;
    }
    ModelConfig c;
    c.arch = architecture_from_string(ckpt::get_str(is));
    c.kt_reorder = kt_reorder_from_string(ckpt::get_str(is));
    c.m_max = ckpt::get_i32(is);
    c.n_max = ckpt::get_i32(is);
    c.hidden = ckpt::get_i32(is);
    c.hidden_layers = ckpt::get_i32(is);
    c.cnn_channels = ckpt::get_i32(is);
    c.embedding_dim = ckpt::get_i32(is);
    c.layer_norm = is.get() == 1;
    const uint32_t nvocab = ckpt::get_u32(is);
    if (c.arch == Architecture::wec) {
        if (nvocab != vocab_size(c.m_max)) throw std::runtime_error("checkpoint vocab mismatch");
        for (uint32_t t = 0; t < nvocab; ++t)
            if (ckpt::get_str(is) != ckpt::token_label(static_cast<int>(t), c.m_max))
                throw std::runtime_error("checkpoint vocab mismatch");
    } else if (nvocab != 0) {
        throw std::runtime_error("unexpected vocab listing");
    }
    Model model(c, 0);
    const uint32_t ntens = ckpt::get_u32(is);
    if (ntens != model.parameters().size()) throw std::runtime_error("checkpoint tensor count");
    for (uint32_t i = 0; i < ntens; ++i) {
        const std::string name = ckpt::get_str(is);
        if (name != model.parameter_names()[i])
            throw std::runtime_error("checkpoint tensor order mismatch");
        const uint32_t nd = ckpt::get_u32(is);
        std::vector<int> shape(nd);
        for (uint32_t d = 0; d < nd; ++d) shape[d] = ckpt::get_i32(is);
        nn::Tensor& t = model.parameters()[i]->val;
        if (shape != t.shape) throw std::runtime_error("checkpoint tensor shape mismatch");
        std::vector<float> buf(t.v.size());
        is.read(reinterpret_cast<char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * 4));
        if (!is) throw std::runtime_error("truncated checkpoint");
        for (size_t j = 0; j < buf.size(); ++j) t.v[j] = double(buf[j]);
    }
    return model;
}

}  // namespace votelab
