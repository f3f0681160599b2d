#pragma once

// Experiment harness: labeled datasets, data augmentation, streaming
// training loops, the three experiments, similarity analysis, disagreement
// search, cross-validation, and the file formats they share (datasets,
// key=value configs, CSV reports, run manifests).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "votelab/axioms.hpp"
#include "votelab/core.hpp"
#include "votelab/losses.hpp"
#include "votelab/models.hpp"
#include "votelab/rules.hpp"
#include "votelab/sampling.hpp"

namespace votelab {

// --- labeled data --------------------------------------------------------------

struct LabeledProfile {
    Profile profile;
    WinningSet winners;
};

// One pair per line: `m;n;r_1|...|r_n;w,w`. The winner field extends the
// profile format with a fourth ';'-separated part.
inline std::string format_dataset_line(const LabeledProfile& lp) {
    return format_profile(lp.profile) + ";" + format_winning_set(lp.winners);
}

inline LabeledProfile parse_dataset_line(const std::string& line) {
    const auto cut = line.rfind(';');
    if (cut == std::string::npos || cut + 1 >= line.size())
        throw std::invalid_argument("dataset line needs a winner field: " + line);
    LabeledProfile lp;
    lp.profile = parse_profile(line.substr(0, cut));
    lp.winners = parse_winning_set(line.substr(cut + 1));
    if (lp.winners.empty()) throw std::invalid_argument("dataset line with empty winning set");
    for (int a : lp.winners)
        if (a < 0 || a >= lp.profile.m)
            throw std::invalid_argument("dataset winner out of range: " + line);
    return lp;
}

// A dataset file is '#'-prefixed header comments followed by one pair per
// line. Comments are kept so that write -> read -> write is byte-identical.
struct Dataset {
    std::vector<std::string> comments;
    std::vector<LabeledProfile> items;
};

inline void save_dataset(const Dataset& ds, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    for (const auto& c : ds.comments) os << "# " << c << "\n";
    for (const auto& lp : ds.items) os << format_dataset_line(lp) << "\n";
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline Dataset load_dataset(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    Dataset ds;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string c = line.substr(1);
            if (!c.empty() && c[0] == ' ') c.erase(0, 1);
            ds.comments.push_back(c);
            continue;
        }
        ds.items.push_back(parse_dataset_line(line));
    }
    return ds;
}

inline Dataset generate_dataset(RuleId rule, const SampleSpec& spec, int count, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("dataset count must be positive");
    Dataset ds;
    ds.comments = {std::string("rule: ") + to_string(rule),
                   std::string("distribution: ") + to_string(spec.dist),
                   "seed: " + std::to_string(seed), "count: " + std::to_string(count)};
    Rng rng(seed);
    ds.items.reserve(count);
    for (int i = 0; i < count; ++i) {
        LabeledProfile lp;
        lp.profile = sample_profile(rng, spec);
        lp.winners = apply_rule(rule, lp.profile);
        ds.items.push_back(std::move(lp));
    }
    return ds;
}

// --- augmentation --------------------------------------------------------------
//
// Variations of a labeled pair that a correct rule would label the same way:
// relabeling alternatives carries the label along; shuffling voters keeps it.

enum class AugmentKind { neutrality, anonymity, both };

inline std::string to_string(AugmentKind k) {
    switch (k) {
        case AugmentKind::neutrality: return "neutrality";
        case AugmentKind::anonymity: return "anonymity";
        case AugmentKind::both: return "both";
    }
    throw std::logic_error("bad AugmentKind");
}

inline AugmentKind augment_from_string(const std::string& s) {
    if (s == "neutrality") return AugmentKind::neutrality;
    if (s == "anonymity") return AugmentKind::anonymity;
    if (s == "both") return AugmentKind::both;
    throw std::invalid_argument("unknown augmentation: " + s);
}

inline LabeledProfile augment_neutrality(const LabeledProfile& lp, Rng& rng) {
    const Ranking sigma = sample_ranking_ic(rng, lp.profile.m);
    return {permute_alternatives(lp.profile, sigma), permute_winners(lp.winners, sigma)};
}

inline LabeledProfile augment_anonymity(const LabeledProfile& lp, Rng& rng) {
    const Ranking tau = sample_ranking_ic(rng, lp.profile.n());
    return {permute_voters(lp.profile, tau), lp.winners};
}

inline LabeledProfile augment_pair(const LabeledProfile& lp, AugmentKind kind, Rng& rng) {
    switch (kind) {
        case AugmentKind::neutrality: return augment_neutrality(lp, rng);
        case AugmentKind::anonymity: return augment_anonymity(lp, rng);
        case AugmentKind::both:
            return rng.below(2) == 0 ? augment_neutrality(lp, rng) : augment_anonymity(lp, rng);
    }
    throw std::logic_error("bad AugmentKind");
}

// --- config files --------------------------------------------------------------
//
// Plain `key = value` lines with '#' comments; keys are namespaced
// ("train.steps", "dist.kind", "weight.pareto").

using Config = std::map<std::string, std::string>;

namespace cfgdetail {
inline std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}
}  // namespace cfgdetail

inline Config parse_config_text(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = cfgdetail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        " is not key = value");
        const std::string key = cfgdetail::trim(t.substr(0, eq));
        const std::string val = cfgdetail::trim(t.substr(eq + 1));
        if (key.empty()) throw std::invalid_argument("config line " + std::to_string(lineno) +
                                                     " has an empty key");
        cfg[key] = val;
    }
    return cfg;
}

inline Config load_config_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config_text(ss.str());
}

inline std::string config_get(const Config& c, const std::string& key, const std::string& def) {
    const auto it = c.find(key);
    return it == c.end() ? def : it->second;
}

inline int config_get_int(const Config& c, const std::string& key, int def) {
    const auto it = c.find(key);
    return it == c.end() ? def : std::stoi(it->second);
}

inline int64_t config_get_i64(const Config& c, const std::string& key, int64_t def) {
    const auto it = c.find(key);
    return it == c.end() ? def : std::stoll(it->second);
}

inline double config_get_double(const Config& c, const std::string& key, double def) {
    const auto it = c.find(key);
    return it == c.end() ? def : std::stod(it->second);
}

inline bool config_get_bool(const Config& c, const std::string& key, bool def) {
    const auto it = c.find(key);
    if (it == c.end()) return def;
    const std::string& v = it->second;
    if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
    if (v == "0" || v == "false" || v == "off" || v == "no") return false;
    throw std::invalid_argument("config key " + key + " is not a boolean: " + v);
}

// --- small report helpers --------------------------------------------------------

inline std::string fmt_fixed(double v, int digits = 2) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// whole numbers without a decimal point, fractions with two digits
inline std::string fmt_compact(double v) {
    return v == std::floor(v) ? std::to_string(static_cast<long long>(v)) : fmt_fixed(v, 2);
}

inline std::vector<Axiom> default_axiom_list() {
    const auto& a = all_axioms();
    return std::vector<Axiom>(a.begin(), a.end());
}

inline void write_csv(const std::string& path, const std::string& header,
                      const std::vector<std::vector<std::string>>& rows) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

// Resolved settings of a run, one sorted `key = value` per line.
inline void write_manifest(const std::string& out_dir, const Config& resolved) {
    std::ofstream os(std::filesystem::path(out_dir) / "manifest.txt", std::ios::binary);
    if (!os) throw std::runtime_error("cannot write manifest in " + out_dir);
    for (const auto& [k, v] : resolved) os << k << " = " << v << "\n";
}

inline void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

// --- training loops --------------------------------------------------------------

struct LrSchedule {
    bool enabled = true;
    double base_lr = 1e-3;
    int64_t t0 = 1000;
    int64_t t_mult = 2;
    double eta_min = 0.0;

    double at(int64_t step) const {
        return enabled ? nn::cosine_warm_restart_lr(step, base_lr, t0, t_mult, eta_min)
                       : base_lr;
    }
};

struct TrainOptions {
    RuleId rule = RuleId::plurality;
    SampleSpec spec;
    ModelConfig model;
    int steps = 15000;
    int batch = 200;
    LrSchedule schedule;
    uint64_t seed = 1;
    bool w2v = true;  // embedding pretraining, wec only
    int w2v_profiles = 20000;
    int w2v_window = 5;
    int w2v_epochs = 5;
    int log_every = 50;
};

struct TrainLogRow {
    int step;  // 1-based, count after the update
    double loss;
    double lr;
};

// Each call returns the labeled pairs for one gradient step.
using BatchProvider = std::function<std::vector<LabeledProfile>(int step)>;

// One AdamW update on a batch; the schedule is indexed by the optimizer's
// own step count so forked branches continue where the parent left off.
inline double supervised_step(Model& model, nn::AdamW& opt, const LrSchedule& sched,
                              const std::vector<LabeledProfile>& batch) {
    opt.set_lr(sched.at(opt.steps()));
    opt.zero_grad();
    double mean_loss = 0.0;
    const double invb = 1.0 / double(batch.size());
    for (const auto& item : batch) {
        auto L = loss_bce(model.logits(item.profile), item.profile, item.winners,
                          model.config().m_max);
        mean_loss += L->val[0] * invb;
        nn::backward(nn::weighted_sum({L}, {invb}));
    }
    opt.step();
    return mean_loss;
}

struct TrainHooks {
    int log_every = 50;
    std::function<void(const TrainLogRow&)> on_log;
    int eval_every = 0;
    std::function<void(int step, Model&)> on_eval;
};

inline void train_stream(Model& model, nn::AdamW& opt, const LrSchedule& sched,
                         const BatchProvider& batches, int steps, const TrainHooks& hooks = {}) {
    for (int s = 0; s < steps; ++s) {
        const double loss = supervised_step(model, opt, sched, batches(s));
        if (!std::isfinite(loss))
            throw std::runtime_error("training diverged: non-finite loss at step " +
                                     std::to_string(opt.steps()));
        const int done = static_cast<int>(opt.steps());
        if (hooks.on_log && hooks.log_every > 0 && done % hooks.log_every == 0)
            hooks.on_log({done, loss, opt.lr()});
        if (hooks.on_eval && hooks.eval_every > 0 && done % hooks.eval_every == 0)
            hooks.on_eval(done, model);
    }
}

// Fresh pairs sampled straight from the distribution and labeled by the
// rule. `fresh_counter`, when given, tallies every sampled profile.
inline BatchProvider fresh_provider(RuleId rule, const SampleSpec& spec, int batch,
                                    std::shared_ptr<Rng> data_rng,
                                    std::shared_ptr<int64_t> fresh_counter = nullptr) {
    return [=](int) {
        std::vector<LabeledProfile> out;
        out.reserve(batch);
        for (int b = 0; b < batch; ++b) {
            LabeledProfile lp;
            lp.profile = sample_profile(*data_rng, spec);
            lp.winners = apply_rule(rule, lp.profile);
            out.push_back(std::move(lp));
            if (fresh_counter) ++*fresh_counter;
        }
        return out;
    };
}

// Mixed batches: ceil(batch * percent/100) fresh pairs first, then
// variations of those same pairs filling the rest. At 100 percent this is
// exactly fresh_provider — same code path, same rng consumption.
inline BatchProvider mixed_provider(RuleId rule, const SampleSpec& spec, int batch,
                                    double fresh_percent, AugmentKind kind,
                                    std::shared_ptr<Rng> data_rng, std::shared_ptr<Rng> aug_rng,
                                    std::shared_ptr<int64_t> fresh_counter = nullptr) {
    if (fresh_percent <= 0.0 || fresh_percent > 100.0)
        throw std::invalid_argument("fresh percentage must be in (0, 100]");
    const int fresh = static_cast<int>(std::ceil(batch * fresh_percent / 100.0));
    return [=](int) {
        std::vector<LabeledProfile> out;
        out.reserve(batch);
        for (int b = 0; b < fresh; ++b) {
            LabeledProfile lp;
            lp.profile = sample_profile(*data_rng, spec);
            lp.winners = apply_rule(rule, lp.profile);
            out.push_back(std::move(lp));
            if (fresh_counter) ++*fresh_counter;
        }
        while (static_cast<int>(out.size()) < batch) {
            const auto& src = out[aug_rng->below(uint64_t(fresh))];
            out.push_back(augment_pair(src, kind, *aug_rng));
        }
        return out;
    };
}

// Uniform draws from a fixed dataset (pretraining, branch training).
inline BatchProvider dataset_provider(std::shared_ptr<const std::vector<LabeledProfile>> items,
                                      int batch, std::shared_ptr<Rng> pick_rng,
                                      AugmentKind kind, bool augment) {
    if (items->empty()) throw std::invalid_argument("empty dataset");
    return [=](int) {
        std::vector<LabeledProfile> out;
        out.reserve(batch);
        for (int b = 0; b < batch; ++b) {
            const auto& src = (*items)[pick_rng->below(items->size())];
            out.push_back(augment ? augment_pair(src, kind, *pick_rng) : src);
        }
        return out;
    };
}

// Build and, for the embedding model, pre-train: word2vec over ballot-token
// sentences from the same distribution. The corpus stream is a separate rng
// fork so supervised data is unaffected by pretraining.
inline Model make_initialized_model(const TrainOptions& o, std::ostream* progress = nullptr) {
    Model model(o.model, derive_seed(o.seed, 0x696E6974));  // "init"
    if (model.config().arch == Architecture::wec && o.w2v) {
        if (progress)
            *progress << "pretraining embeddings on " << o.w2v_profiles << " profiles\n";
        Rng rng(derive_seed(o.seed, 0x773276));  // "w2v"
        std::vector<std::vector<int>> corpus;
        corpus.reserve(o.w2v_profiles);
        const int m_max = model.config().m_max;
        for (int i = 0; i < o.w2v_profiles; ++i) {
            const Profile p = sample_profile(rng, o.spec);
            std::vector<int> sentence;
            sentence.reserve(p.rankings.size());
            for (const Ranking& r : p.rankings) sentence.push_back(ranking_token(r, m_max));
            corpus.push_back(std::move(sentence));
        }
        nn::Word2VecConfig wc;
        wc.dim = model.config().embedding_dim;
        wc.window = o.w2v_window;
        wc.epochs = o.w2v_epochs;
        model.set_embedding_rows(
            nn::train_word2vec(corpus, static_cast<int>(vocab_size(m_max)), wc, rng));
    }
    return model;
}

// Plain streaming training on fresh batches.
inline Model train_supervised(const TrainOptions& o, std::vector<TrainLogRow>* log = nullptr,
                              std::ostream* progress = nullptr) {
    Model model = make_initialized_model(o, progress);
    nn::AdamW opt(model.parameters());
    auto data_rng = std::make_shared<Rng>(derive_seed(o.seed, 0x64617461));  // "data"
    TrainHooks hooks;
    hooks.log_every = o.log_every;
    hooks.on_log = [&](const TrainLogRow& row) {
        if (log) log->push_back(row);
        if (progress && row.step % 500 == 0)
            *progress << "step " << row.step << "  loss " << fmt_fixed(row.loss, 5) << "\n";
    };
    train_stream(model, opt, o.schedule, fresh_provider(o.rule, o.spec, o.batch, data_rng),
                 o.steps, hooks);
    return model;
}

// --- evaluation --------------------------------------------------------------

struct ModelEvalStats {
    int profiles = 0;
    double identity_pct = 0;  // model set equals the rule's set
    double subset_pct = 0;    // nonempty model set contained in the rule's set
    double empty_pct = 0;
    double mean_set_size = 0;
};

inline ModelEvalStats evaluate_vs_rule(const VotingFunction& model_fn,
                                       const VotingFunction& rule_fn, const SampleSpec& spec,
                                       uint64_t seed, int profiles) {
    Rng rng(seed);
    ModelEvalStats st;
    st.profiles = profiles;
    int64_t size_sum = 0;
    for (int i = 0; i < profiles; ++i) {
        const Profile p = sample_profile(rng, spec);
        const WinningSet want = rule_fn(p);
        const WinningSet got = model_fn(p);
        if (got == want) st.identity_pct += 1;
        if (!got.empty() && std::includes(want.begin(), want.end(), got.begin(), got.end()))
            st.subset_pct += 1;
        if (got.empty()) st.empty_pct += 1;
        size_sum += static_cast<int64_t>(got.size());
    }
    st.identity_pct *= 100.0 / profiles;
    st.subset_pct *= 100.0 / profiles;
    st.empty_pct *= 100.0 / profiles;
    st.mean_set_size = double(size_sum) / profiles;
    return st;
}

// One axiom-satisfaction measurement; `ok` false means the profile budget
// ran out before enough applicable profiles were found (reported as "n/a").
struct AxiomCell {
    bool ok = false;
    int applicable = 0;
    double pct = 0;
};

inline AxiomCell axiom_cell(const VotingFunction& fn, Axiom axiom, const SampleSpec& spec,
                            uint64_t seed, const SatisfactionConfig& sc) {
    try {
        const SatisfactionResult r = satisfaction_degree(fn, axiom, spec, seed, sc);
        return {true, r.applicable, r.percent()};
    } catch (const std::runtime_error&) {
        return {false, 0, 0};
    }
}

struct AxiomTableEntry {
    std::string name;
    Axiom axiom;
    Distribution dist;
    AxiomCell cell;
};

// Satisfaction of each function under each axiom and distribution. Seeds are
// derived per cell, so the table does not depend on evaluation order.
inline std::vector<AxiomTableEntry> axiom_table(
    const std::vector<std::pair<std::string, VotingFunction>>& fns,
    const std::vector<Axiom>& axioms, const std::vector<Distribution>& dists,
    const SampleSpec& base_spec, uint64_t seed, const SatisfactionConfig& sc) {
    std::vector<AxiomTableEntry> out;
    for (size_t f = 0; f < fns.size(); ++f)
        for (const Axiom axiom : axioms)
            for (const Distribution dist : dists) {
                SampleSpec spec = base_spec;
                spec.dist = dist;
                const uint64_t cell_seed = derive_seed(
                    seed, (uint64_t(f) << 16) ^ (uint64_t(axiom) << 8) ^ uint64_t(dist));
                out.push_back({fns[f].first, axiom, dist,
                               axiom_cell(fns[f].second, axiom, spec, cell_seed, sc)});
            }
    return out;
}

inline void write_axiom_csv(const std::string& path,
                            const std::vector<AxiomTableEntry>& entries) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : entries) {
        rows.push_back({e.name, to_string(e.axiom), to_string(e.dist),
                        e.cell.ok ? std::to_string(e.cell.applicable) : "n/a",
                        e.cell.ok ? fmt_fixed(e.cell.pct) : "n/a"});
    }
    write_csv(path, "rule_or_model,axiom,distribution,n_applicable,satisfied_pct", rows);
}

// --- experiment 1: relative evaluation ------------------------------------------

struct Exp1Options {
    TrainOptions train;
    DecoderKind decoder = DecoderKind::plain;
    int eval_profiles = 1000;
    std::vector<Axiom> axioms = default_axiom_list();
    SatisfactionConfig sat;
    std::string out_dir;  // empty: no files
};

struct Exp1MetricRow {
    std::string metric;
    bool ok = true;  // n/a propagation
    double rule_value = 0;
    double model_value = 0;
    double relative() const { return rule_value - model_value; }
};

struct Exp1Result {
    Model model;
    ModelEvalStats eval;
    std::vector<Exp1MetricRow> rows;
    std::vector<TrainLogRow> train_log;
};

inline Exp1Result run_exp1(const Exp1Options& o, std::ostream* progress = nullptr) {
    std::vector<TrainLogRow> log;
    Model model = train_supervised(o.train, &log, progress);

    auto shared = std::make_shared<Model>(model.clone());
    const uint64_t eval_seed = derive_seed(o.train.seed, 0x6576616C);  // "eval"
    const VotingFunction model_fn =
        make_voting_function(shared, o.decoder, derive_seed(o.train.seed, 0x6E616176));
    const VotingFunction rule_fn = make_rule_function(o.train.rule);

    if (progress) *progress << "evaluating accuracy on " << o.eval_profiles << " profiles\n";
    const ModelEvalStats ev =
        evaluate_vs_rule(model_fn, rule_fn, o.train.spec, eval_seed, o.eval_profiles);

    std::vector<Exp1MetricRow> rows;
    rows.push_back({"identity_accuracy", true, 100.0, ev.identity_pct});
    rows.push_back({"subset_accuracy", true, 100.0, ev.subset_pct});
    rows.push_back({"empty_rate", true, 0.0, ev.empty_pct});

    const std::string rule_name = to_string(o.train.rule);
    std::vector<AxiomTableEntry> table;
    for (const Axiom axiom : o.axioms) {
        if (progress) *progress << "axiom " << to_string(axiom) << "\n";
        const uint64_t cell_seed = derive_seed(eval_seed, uint64_t(axiom));
        const AxiomCell rc = axiom_cell(rule_fn, axiom, o.train.spec, cell_seed, o.sat);
        const AxiomCell mc = axiom_cell(model_fn, axiom, o.train.spec, cell_seed, o.sat);
        table.push_back({rule_name, axiom, o.train.spec.dist, rc});
        table.push_back({"model", axiom, o.train.spec.dist, mc});
        rows.push_back({std::string("axiom_") + to_string(axiom), rc.ok && mc.ok, rc.pct, mc.pct});
    }

    if (!o.out_dir.empty()) {
        ensure_dir(o.out_dir);
        const std::filesystem::path dir(o.out_dir);
        save_model(model, (dir / "model.ckpt").string(),
                   {{"rule", rule_name},
                    {"distribution", to_string(o.train.spec.dist)},
                    {"decoder", to_string(o.decoder)}});
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : rows)
            csv.push_back({r.metric, r.ok ? fmt_fixed(r.rule_value) : "n/a",
                           r.ok ? fmt_fixed(r.model_value) : "n/a",
                           r.ok ? fmt_fixed(r.relative()) : "n/a"});
        write_csv((dir / "exp1.csv").string(), "metric,rule_value,model_value,relative", csv);
        write_axiom_csv((dir / "axioms.csv").string(), table);
        std::vector<std::vector<std::string>> tlog;
        for (const auto& r : log)
            tlog.push_back({std::to_string(r.step), fmt_fixed(r.loss, 6), fmt_fixed(r.lr, 8)});
        write_csv((dir / "train_log.csv").string(), "step,loss,lr", tlog);
    }
    return {std::move(model), ev, std::move(rows), std::move(log)};
}

// --- experiment 2: sample efficiency of augmentation -----------------------------

struct Exp2V1Options {
    TrainOptions train;          // steps = total including pretraining
    int pretrain_steps = 500;
    int initial_size = 10000;    // pairs sampled before training starts
    int eval_every = 250;
    AugmentKind augment = AugmentKind::neutrality;
    Axiom target_axiom = Axiom::neutrality;
    int eval_profiles = 1000;
    SatisfactionConfig sat;      // reduced budget by default
    std::string out_dir;
};

struct Exp2CurveRow {
    int step;
    std::string branch;
    double identity_pct;
    bool axiom_ok;
    double axiom_pct;
};

struct Exp2V1Result {
    std::vector<Exp2CurveRow> rows;
    int64_t fresh_after_fork_augmented = 0;  // must stay zero
    int64_t fresh_after_fork_sampled = 0;
    Model model_augmented;
    Model model_sampled;
};

inline Exp2V1Result run_exp2_v1(const Exp2V1Options& o, std::ostream* progress = nullptr) {
    if (o.train.steps <= o.pretrain_steps)
        throw std::invalid_argument("exp2 v1 needs steps beyond pretraining");
    const TrainOptions& t = o.train;

    const Dataset initial = generate_dataset(t.rule, t.spec, o.initial_size,
                                             derive_seed(t.seed, 0x64730000));  // "ds"
    auto items = std::make_shared<const std::vector<LabeledProfile>>(initial.items);

    Model pre = make_initialized_model(t, progress);
    nn::AdamW opt(pre.parameters());
    auto pick_rng = std::make_shared<Rng>(derive_seed(t.seed, 0x7069636B));  // "pick"
    if (progress) *progress << "pretraining " << o.pretrain_steps << " steps\n";
    train_stream(pre, opt, t.schedule,
                 dataset_provider(items, t.batch, pick_rng, o.augment, false),
                 o.pretrain_steps, {});

    // fork: both branches start bit-identical
    Model model_a = pre.clone();
    Model model_b = pre.clone();
    nn::AdamW opt_a(model_a.parameters());
    nn::AdamW opt_b(model_b.parameters());
    opt_a.copy_state_from(opt);
    opt_b.copy_state_from(opt);

    std::vector<Exp2CurveRow> rows;
    const uint64_t eval_seed = derive_seed(t.seed, 0x6576616C);
    auto eval_branch = [&](const std::string& branch, int step, Model& m) {
        auto shared = std::make_shared<Model>(m.clone());
        const VotingFunction fn = make_voting_function(shared, DecoderKind::plain);
        const ModelEvalStats ev =
            evaluate_vs_rule(fn, make_rule_function(t.rule), t.spec, eval_seed, o.eval_profiles);
        const AxiomCell cell = axiom_cell(fn, o.target_axiom, t.spec,
                                          derive_seed(eval_seed, uint64_t(step)), o.sat);
        rows.push_back({step, branch, ev.identity_pct, cell.ok, cell.pct});
        if (progress)
            *progress << "step " << step << " " << branch << "  identity "
                      << fmt_fixed(ev.identity_pct) << "  " << to_string(o.target_axiom) << " "
                      << (cell.ok ? fmt_fixed(cell.pct) : "n/a") << "\n";
    };
    eval_branch("augmented", o.pretrain_steps, model_a);
    eval_branch("sampled", o.pretrain_steps, model_b);

    // branch A: variations of the initial pairs only — no new samples
    auto fresh_a = std::make_shared<int64_t>(0);
    auto aug_rng = std::make_shared<Rng>(derive_seed(t.seed, 0xA0));
    const BatchProvider prov_a =
        dataset_provider(items, t.batch, aug_rng, o.augment, true);
    // branch B: fresh sampled data
    auto fresh_b = std::make_shared<int64_t>(0);
    auto data_rng = std::make_shared<Rng>(derive_seed(t.seed, 0xB0));
    const BatchProvider prov_b = fresh_provider(t.rule, t.spec, t.batch, data_rng, fresh_b);

    const int branch_steps = t.steps - o.pretrain_steps;
    TrainHooks hooks_a;
    hooks_a.eval_every = o.eval_every;
    hooks_a.on_eval = [&](int step, Model& m) { eval_branch("augmented", step, m); };
    train_stream(model_a, opt_a, t.schedule, prov_a, branch_steps, hooks_a);

    TrainHooks hooks_b;
    hooks_b.eval_every = o.eval_every;
    hooks_b.on_eval = [&](int step, Model& m) { eval_branch("sampled", step, m); };
    train_stream(model_b, opt_b, t.schedule, prov_b, branch_steps, hooks_b);

    std::sort(rows.begin(), rows.end(), [](const Exp2CurveRow& a, const Exp2CurveRow& b) {
        return a.step != b.step ? a.step < b.step : a.branch < b.branch;
    });

    if (!o.out_dir.empty()) {
        ensure_dir(o.out_dir);
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : rows)
            csv.push_back({std::to_string(r.step), r.branch, fmt_fixed(r.identity_pct),
                           r.axiom_ok ? fmt_fixed(r.axiom_pct) : "n/a"});
        write_csv((std::filesystem::path(o.out_dir) / "exp2_v1.csv").string(),
                  "step,branch,identity_accuracy,axiom_pct", csv);
    }
    return {std::move(rows), *fresh_a, *fresh_b, std::move(model_a), std::move(model_b)};
}

struct Exp2V2Options {
    TrainOptions train;
    std::vector<double> p_grid = {5, 10, 25, 50, 100};  // percent freshly sampled
    AugmentKind augment = AugmentKind::neutrality;
    Axiom target_axiom = Axiom::neutrality;
    int eval_profiles = 1000;
    SatisfactionConfig sat;
    std::string out_dir;
};

struct Exp2V2Row {
    double p;
    ModelEvalStats eval;
    bool axiom_ok;
    double axiom_pct;
    int64_t fresh_samples;
};

struct Exp2V2Result {
    std::vector<Exp2V2Row> rows;
};

inline Exp2V2Result run_exp2_v2(const Exp2V2Options& o, std::ostream* progress = nullptr) {
    const TrainOptions& t = o.train;
    Exp2V2Result res;
    for (const double p : o.p_grid) {
        if (progress) *progress << "training with " << p << "% fresh pairs per batch\n";
        Model model = make_initialized_model(t, progress);
        nn::AdamW opt(model.parameters());
        auto data_rng = std::make_shared<Rng>(derive_seed(t.seed, 0x64617461));  // as exp1
        auto aug_rng = std::make_shared<Rng>(derive_seed(t.seed, 0x617567));     // "aug"
        auto fresh = std::make_shared<int64_t>(0);
        train_stream(model, opt, t.schedule,
                     mixed_provider(t.rule, t.spec, t.batch, p, o.augment, data_rng, aug_rng,
                                    fresh),
                     t.steps, {});

        auto shared = std::make_shared<Model>(model.clone());
        const VotingFunction fn = make_voting_function(shared, DecoderKind::plain);
        const uint64_t eval_seed = derive_seed(t.seed, 0x6576616C);
        const ModelEvalStats ev =
            evaluate_vs_rule(fn, make_rule_function(t.rule), t.spec, eval_seed, o.eval_profiles);
        const AxiomCell cell =
            axiom_cell(fn, o.target_axiom, t.spec, derive_seed(eval_seed, 0x7632), o.sat);
        res.rows.push_back({p, ev, cell.ok, cell.pct, *fresh});
        if (progress)
            *progress << "p=" << p << "  identity " << fmt_fixed(ev.identity_pct) << "\n";
    }
    if (!o.out_dir.empty()) {
        ensure_dir(o.out_dir);
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : res.rows)
            csv.push_back({fmt_compact(r.p), fmt_fixed(r.eval.identity_pct),
                           fmt_fixed(r.eval.subset_pct),
                           r.axiom_ok ? fmt_fixed(r.axiom_pct) : "n/a",
                           fmt_fixed(r.eval.empty_pct)});
        write_csv((std::filesystem::path(o.out_dir) / "exp2_v2.csv").string(),
                  "p,identity_accuracy,subset_accuracy,axiom_pct,empty_rate", csv);
    }
    return res;
}

// --- experiment 3: unsupervised axiom optimization -------------------------------

struct Exp3Options {
    SampleSpec spec;
    ModelConfig model;
    AxiomLossConfig objectives;
    DecoderKind decoder = DecoderKind::navg;
    int steps = 15000;
    int batch = 200;
    LrSchedule schedule;
    uint64_t seed = 1;
    bool w2v = true;
    int w2v_profiles = 20000;
    int eval_profiles = 1000;
    std::vector<Axiom> axioms = default_axiom_list();
    SatisfactionConfig sat;
    std::string out_dir;
};

struct Exp3LossRow {
    int step;
    std::string objective;
    double value;
};

struct Exp3Result {
    Model model;
    std::vector<Exp3LossRow> loss_rows;
    std::vector<AxiomTableEntry> axioms;  // of the decoded model
    ModelEvalStats output_stats;          // empty rate / set size (no teacher rule)
};

inline std::vector<std::string> enabled_objectives(const AxiomLossConfig& c) {
    std::vector<std::string> names;
    if (c.no_winner) names.push_back("no_winner");
    if (c.condorcet) names.push_back("condorcet");
    if (c.pareto) names.push_back("pareto");
    if (c.independence) names.push_back("independence");
    if (c.anonymity) names.push_back("anonymity");
    return names;
}

inline Exp3Result run_exp3(const Exp3Options& o, std::ostream* progress = nullptr) {
    TrainOptions init;
    init.spec = o.spec;
    init.model = o.model;
    init.seed = o.seed;
    init.w2v = o.w2v;
    init.w2v_profiles = o.w2v_profiles;
    Model model = make_initialized_model(init, progress);
    nn::AdamW opt(model.parameters());
    Rng data_rng(derive_seed(o.seed, 0x64617461));

    const std::vector<std::string> names = enabled_objectives(o.objectives);
    std::vector<Exp3LossRow> loss_rows;
    const double invb = 1.0 / double(o.batch);
    for (int s = 0; s < o.steps; ++s) {
        opt.set_lr(o.schedule.at(opt.steps()));
        opt.zero_grad();
        std::map<std::string, double> means;
        double total = 0;
        for (int b = 0; b < o.batch; ++b) {
            const Profile p = sample_profile(data_rng, o.spec);
            const Rng loss_rng = data_rng.fork(uint64_t(s) * o.batch + b + 1);
            const AxiomLossParts parts = combined_axiom_loss_parts(model, p, loss_rng,
                                                                   o.objectives);
            total += parts.total->val[0] * invb;
            for (const auto& [name, node] : parts.parts) means[name] += node->val[0] * invb;
            nn::backward(nn::weighted_sum({parts.total}, {invb}));
        }
        if (!std::isfinite(total))
            throw std::runtime_error("training diverged: non-finite loss at step " +
                                     std::to_string(s + 1));
        opt.step();
        for (const auto& name : names) loss_rows.push_back({s + 1, name, means[name]});
        if (progress && (s + 1) % 500 == 0)
            *progress << "step " << s + 1 << "  loss " << fmt_fixed(total, 5) << "\n";
    }

    auto shared = std::make_shared<Model>(model.clone());
    const VotingFunction fn =
        make_voting_function(shared, o.decoder, derive_seed(o.seed, 0x6E616176));
    if (progress) *progress << "evaluating axioms with " << to_string(o.decoder) << " decoding\n";
    const std::vector<AxiomTableEntry> table =
        axiom_table({{"model", fn}}, o.axioms, {o.spec.dist}, o.spec,
                    derive_seed(o.seed, 0x6576616C), o.sat);

    // output shape statistics against a never-matching dummy (identity unused)
    Rng ev_rng(derive_seed(o.seed, 0x73746174));  // "stat"
    ModelEvalStats st;
    st.profiles = o.eval_profiles;
    int64_t size_sum = 0;
    for (int i = 0; i < o.eval_profiles; ++i) {
        const Profile p = sample_profile(ev_rng, o.spec);
        const WinningSet got = fn(p);
        if (got.empty()) st.empty_pct += 1;
        size_sum += static_cast<int64_t>(got.size());
    }
    st.empty_pct *= 100.0 / o.eval_profiles;
    st.mean_set_size = double(size_sum) / o.eval_profiles;

    if (!o.out_dir.empty()) {
        ensure_dir(o.out_dir);
        const std::filesystem::path dir(o.out_dir);
        save_model(model, (dir / "model.ckpt").string(),
                   {{"distribution", to_string(o.spec.dist)},
                    {"decoder", to_string(o.decoder)},
                    {"objectives", [&] {
                         std::string s;
                         for (const auto& n : names) s += (s.empty() ? "" : "+") + n;
                         return s;
                     }()}});
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : loss_rows)
            csv.push_back({std::to_string(r.step), r.objective, fmt_fixed(r.value, 6)});
        write_csv((dir / "exp3_loss.csv").string(), "step,objective,value", csv);
        write_axiom_csv((dir / "axioms.csv").string(), table);
        std::vector<std::vector<std::string>> ev{
            {"empty_rate", fmt_fixed(st.empty_pct)},
            {"mean_set_size", fmt_fixed(st.mean_set_size, 3)}};
        write_csv((dir / "exp3_eval.csv").string(), "metric,value", ev);
    }
    return {std::move(model), std::move(loss_rows), table, st};
}

// Ablation: every subset of {condorcet, pareto, independence} on top of the
// always-on no-winner objective.
struct Exp3AblationRow {
    std::string subset;
    std::map<Axiom, AxiomCell> axioms;
    double empty_pct;
    double mean_set_size;
};

inline std::vector<Exp3AblationRow> run_exp3_ablation(const Exp3Options& base,
                                                      std::ostream* progress = nullptr) {
    std::vector<Exp3AblationRow> out;
    for (int massk = 0; massk < 8; ++massk) {
        Exp3Options o = base;
        o.out_dir.clear();
        o.objectives.no_winner = true;
        o.objectives.condorcet = massk & 1;
        o.objectives.pareto = massk & 2;
        o.objectives.independence = massk & 4;
        std::string subset = "nw";
        if (o.objectives.condorcet) subset += "+c";
        if (o.objectives.pareto) subset += "+p";
        if (o.objectives.independence) subset += "+i";
        if (progress) *progress << "ablation " << subset << "\n";
        Exp3Result r = run_exp3(o, progress);
        Exp3AblationRow row;
        row.subset = subset;
        for (const auto& e : r.axioms) row.axioms[e.axiom] = e.cell;
        row.empty_pct = r.output_stats.empty_pct;
        row.mean_set_size = r.output_stats.mean_set_size;
        out.push_back(std::move(row));
    }
    if (!base.out_dir.empty()) {
        ensure_dir(base.out_dir);
        std::vector<std::vector<std::string>> csv;
        for (const auto& r : out) {
            std::vector<std::string> line{r.subset};
            for (const Axiom a : base.axioms) {
                const auto it = r.axioms.find(a);
                line.push_back(it != r.axioms.end() && it->second.ok
                                   ? fmt_fixed(it->second.pct)
                                   : "n/a");
            }
            line.push_back(fmt_fixed(r.empty_pct));
            line.push_back(fmt_fixed(r.mean_set_size, 3));
            csv.push_back(std::move(line));
        }
        std::string header = "subset";
        for (const Axiom a : base.axioms) header += std::string(",") + to_string(a);
        header += ",empty_rate,mean_set_size";
        write_csv((std::filesystem::path(base.out_dir) / "exp3_ablation.csv").string(), header,
                  csv);
    }
    return out;
}

// --- similarity analysis ----------------------------------------------------------

struct SimilarityResult {
    std::vector<std::string> names;
    std::vector<std::vector<double>> identity;  // [i][j]: % F_i(P) == F_j(P)
    std::vector<std::vector<double>> subset;    // [i][j]: % F_i(P) ⊆ F_j(P)
};

inline SimilarityResult similarity_table(
    const std::vector<std::pair<std::string, VotingFunction>>& fns, const SampleSpec& spec,
    int profiles, uint64_t seed, std::ostream* progress = nullptr) {
    const size_t k = fns.size();
    SimilarityResult res;
    for (const auto& [name, fn] : fns) res.names.push_back(name);
    res.identity.assign(k, std::vector<double>(k, 0.0));
    res.subset.assign(k, std::vector<double>(k, 0.0));
    Rng rng(seed);
    std::vector<WinningSet> sets(k);
    for (int t = 0; t < profiles; ++t) {
        const Profile p = sample_profile(rng, spec);
        for (size_t i = 0; i < k; ++i) sets[i] = fns[i].second(p);
        for (size_t i = 0; i < k; ++i)
            for (size_t j = 0; j < k; ++j) {
                if (sets[i] == sets[j]) res.identity[i][j] += 1;
                if (std::includes(sets[j].begin(), sets[j].end(), sets[i].begin(),
                                  sets[i].end()))
                    res.subset[i][j] += 1;
            }
        if (progress && (t + 1) % 2000 == 0) *progress << (t + 1) << " profiles\n";
    }
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) {
            res.identity[i][j] *= 100.0 / profiles;
            res.subset[i][j] *= 100.0 / profiles;
        }
    return res;
}

inline void write_similarity_csv(const std::string& path, const std::vector<std::string>& names,
                                 const std::vector<std::vector<double>>& matrix) {
    std::string header = "function";
    for (const auto& n : names) header += "," + n;
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < names.size(); ++i) {
        std::vector<std::string> row{names[i]};
        for (size_t j = 0; j < names.size(); ++j) row.push_back(fmt_fixed(matrix[i][j]));
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

// --- disagreement search -----------------------------------------------------------

enum class DisagreeMode { weak, strong };

inline std::string to_string(DisagreeMode m) {
    return m == DisagreeMode::weak ? "weak" : "strong";
}

inline DisagreeMode disagree_mode_from_string(const std::string& s) {
    if (s == "weak") return DisagreeMode::weak;
    if (s == "strong") return DisagreeMode::strong;
    throw std::invalid_argument("unknown disagreement mode: " + s);
}

struct DisagreeResult {
    bool found = false;
    int scanned = 0;
    Profile profile;
    WinningSet candidate_set;
    std::vector<std::pair<std::string, WinningSet>> rule_sets;
};

// Scan sampled profiles for one where the candidate disagrees with every
// reference rule: weak = equal to none of them, strong = disjoint from all
// of them. Among qualifying profiles, keep the one with the fewest voters
// (first found wins ties).
inline DisagreeResult find_disagreeing_profile(
    const VotingFunction& candidate,
    const std::vector<std::pair<std::string, VotingFunction>>& rules, const SampleSpec& spec,
    DisagreeMode mode, uint64_t seed, int scan = 10000) {
    Rng rng(seed);
    DisagreeResult res;
    res.scanned = scan;
    int best_n = 0;
    for (int t = 0; t < scan; ++t) {
        const Profile p = sample_profile(rng, spec);
        if (res.found && p.n() >= best_n) continue;
        const WinningSet got = candidate(p);
        bool qualifies = true;
        for (const auto& [name, fn] : rules) {
            const WinningSet rs = fn(p);
            if (mode == DisagreeMode::weak) {
                if (rs == got) {
                    qualifies = false;
                    break;
                }
            } else {
                WinningSet inter;
                std::set_intersection(got.begin(), got.end(), rs.begin(), rs.end(),
                                      std::back_inserter(inter));
                if (!inter.empty()) {
                    qualifies = false;
                    break;
                }
            }
        }
        if (!qualifies) continue;
        res.found = true;
        best_n = p.n();
        res.profile = p;
        res.candidate_set = got;
    }
    if (res.found) {
        res.rule_sets.clear();
        for (const auto& [name, fn] : rules) res.rule_sets.push_back({name, fn(res.profile)});
    }
    return res;
}

inline std::string format_disagreement(const DisagreeResult& r, const std::string& candidate_name) {
    std::ostringstream os;
    if (!r.found) {
        os << "none (scanned " << r.scanned << " profiles)\n";
        return os.str();
    }
    os << "profile (" << r.profile.n() << " voters, " << r.profile.m << " alternatives): "
       << format_profile(r.profile) << "\n";
    os << candidate_name << ": {" << format_winning_set(r.candidate_set) << "}\n";
    for (const auto& [name, ws] : r.rule_sets)
        os << name << ": {" << format_winning_set(ws) << "}\n";
    return os.str();
}

// --- cross-validation ---------------------------------------------------------------

struct CrossValOptions {
    ModelConfig model;
    int folds = 10;
    int epochs = 8;
    int batch = 200;
    LrSchedule schedule;
    uint64_t seed = 1;
    bool w2v = true;
    int w2v_profiles = 20000;
    SampleSpec spec;  // for embedding pretraining only
    std::string out_dir;
};

struct FoldStats {
    double train_loss = 0;
    double train_acc = 0;
    double test_loss = 0;
    double test_acc = 0;
};

struct CrossValResult {
    std::vector<FoldStats> folds;
    FoldStats mean;
    FoldStats stddev;
};

inline CrossValResult cross_validate(const CrossValOptions& o,
                                     const std::vector<LabeledProfile>& data,
                                     std::ostream* progress = nullptr) {
    if (o.folds < 2) throw std::invalid_argument("need at least two folds");
    if (static_cast<int>(data.size()) < o.folds)
        throw std::invalid_argument("dataset smaller than the fold count");

    // fixed seed -> fixed fold assignment
    std::vector<int> order(data.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    Rng fold_rng(derive_seed(o.seed, 0x666F6C64));  // "fold"
    for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[fold_rng.below(i)]);

    TrainOptions init;
    init.spec = o.spec;
    init.model = o.model;
    init.seed = o.seed;
    init.w2v = o.w2v;
    init.w2v_profiles = o.w2v_profiles;
    const Model base = make_initialized_model(init, progress);

    auto measure = [&](const Model& m, const std::vector<int>& idx) {
        nn::NoGradGuard guard;
        FoldStats s;
        for (const int i : idx) {
            const auto& item = data[size_t(i)];
            const auto z = m.logits(item.profile);
            s.test_loss +=
                loss_bce(z, item.profile, item.winners, m.config().m_max)->val[0];
            if (decode_plain(z->val.v, item.profile.m) == item.winners) s.test_acc += 1;
        }
        s.test_loss /= double(idx.size());
        s.test_acc *= 100.0 / double(idx.size());
        return s;
    };

    CrossValResult res;
    for (int f = 0; f < o.folds; ++f) {
        const size_t lo = data.size() * size_t(f) / o.folds;
        const size_t hi = data.size() * size_t(f + 1) / o.folds;
        std::vector<int> test_idx(order.begin() + lo, order.begin() + hi);
        std::vector<int> train_idx;
        train_idx.reserve(order.size() - test_idx.size());
        train_idx.insert(train_idx.end(), order.begin(), order.begin() + lo);
        train_idx.insert(train_idx.end(), order.begin() + hi, order.end());

        Model model = base.clone();
        nn::AdamW opt(model.parameters());
        Rng shuffle_rng(derive_seed(o.seed, 0xE0 + uint64_t(f)));
        for (int e = 0; e < o.epochs; ++e) {
            for (size_t i = train_idx.size(); i > 1; --i)
                std::swap(train_idx[i - 1], train_idx[shuffle_rng.below(i)]);
            for (size_t at = 0; at < train_idx.size(); at += o.batch) {
                std::vector<LabeledProfile> batch;
                const size_t end = std::min(at + size_t(o.batch), train_idx.size());
                for (size_t i = at; i < end; ++i) batch.push_back(data[size_t(train_idx[i])]);
                const double loss = supervised_step(model, opt, o.schedule, batch);
                if (!std::isfinite(loss))
                    throw std::runtime_error("training diverged in fold " + std::to_string(f));
            }
        }
        FoldStats st;
        const FoldStats tr = measure(model, train_idx);
        const FoldStats te = measure(model, test_idx);
        st.train_loss = tr.test_loss;
        st.train_acc = tr.test_acc;
        st.test_loss = te.test_loss;
        st.test_acc = te.test_acc;
        res.folds.push_back(st);
        if (progress)
            *progress << "fold " << f << "  train " << fmt_fixed(st.train_acc) << "  test "
                      << fmt_fixed(st.test_acc) << "\n";
    }

    auto accumulate = [&](auto pick) {
        double mean = 0;
        for (const auto& s : res.folds) mean += pick(s);
        mean /= double(res.folds.size());
        double var = 0;
        for (const auto& s : res.folds) var += (pick(s) - mean) * (pick(s) - mean);
        var /= double(res.folds.size() - 1);
        return std::pair<double, double>(mean, std::sqrt(var));
    };
    auto [ml, sl] = accumulate([](const FoldStats& s) { return s.train_loss; });
    auto [ma, sa] = accumulate([](const FoldStats& s) { return s.train_acc; });
    auto [tl, stl] = accumulate([](const FoldStats& s) { return s.test_loss; });
    auto [ta, sta] = accumulate([](const FoldStats& s) { return s.test_acc; });
    res.mean = {ml, ma, tl, ta};
    res.stddev = {sl, sa, stl, sta};

    if (!o.out_dir.empty()) {
        ensure_dir(o.out_dir);
        std::vector<std::vector<std::string>> csv;
        for (size_t f = 0; f < res.folds.size(); ++f) {
            const auto& s = res.folds[f];
            csv.push_back({std::to_string(f), fmt_fixed(s.train_loss, 4),
                           fmt_fixed(s.train_acc), fmt_fixed(s.test_loss, 4),
                           fmt_fixed(s.test_acc)});
        }
        csv.push_back({"mean", fmt_fixed(res.mean.train_loss, 4), fmt_fixed(res.mean.train_acc),
                       fmt_fixed(res.mean.test_loss, 4), fmt_fixed(res.mean.test_acc)});
        csv.push_back({"std", fmt_fixed(res.stddev.train_loss, 4),
                       fmt_fixed(res.stddev.train_acc), fmt_fixed(res.stddev.test_loss, 4),
                       fmt_fixed(res.stddev.test_acc)});
        write_csv((std::filesystem::path(o.out_dir) / "crossval.csv").string(),
                  "fold,train_loss,train_acc,test_loss,test_acc", csv);
    }
    return res;
}

}  // namespace votelab
