// Acceptance gate: the product-level checks that must hold before a build
// ships. Each criterion prints exactly one PASS/FAIL line; the process exits
// nonzero if any selected criterion fails. Run with --criteria 1,2,... to
// select a subset (default: all). Training artifacts land under --out
// (default acceptance_out/).

#include <chrono>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../fd_check.hpp"
#include "../golden_cases.hpp"
#include "../oracles.hpp"
#include "votelab/harness.hpp"

using namespace votelab;

namespace {

constexpr uint64_t kSeed = 20260816;

struct Gate {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string out_root = "acceptance_out";

SampleSpec bench_spec() {
    SampleSpec spec;  // 1..5 alternatives, 1..55 voters, impartial culture
    return spec;
}

bool within(double value, double center, double tol) {
    return value >= center - tol && value <= center + tol;
}

// ---- criteria 1 and 2 share one rule-axiom satisfaction sweep ------------------

struct AxiomPass {
    std::map<std::pair<RuleId, Axiom>, AxiomCell> cells;
    double elapsed_s = 0;
};

const AxiomPass& axiom_pass() {
    static std::optional<AxiomPass> cached;
    if (!cached) {
        const auto t0 = std::chrono::steady_clock::now();
        AxiomPass pass;
        const SampleSpec spec = bench_spec();
        const SatisfactionConfig sc;  // 400 applicable, 400k attempt budget
        for (const RuleId id : all_rule_ids()) {
            std::cerr << "  measuring " << to_string(id) << "\n";
            const VotingFunction fn = make_rule_function(id);
            for (const Axiom axiom : all_axioms()) {
                const uint64_t cell_seed =
                    derive_seed(kSeed, (uint64_t(id) << 8) ^ uint64_t(axiom));
                pass.cells[{id, axiom}] = axiom_cell(fn, axiom, spec, cell_seed, sc);
            }
        }
        pass.elapsed_s = seconds_since(t0);
        cached = std::move(pass);
    }
    return *cached;
}

Gate criterion1() {
    Gate g;
    const AxiomPass& pass = axiom_pass();
    const std::set<RuleId> condorcet_consistent = {
        RuleId::copeland,     RuleId::llull,   RuleId::uncovered_set, RuleId::top_cycle,
        RuleId::banks,        RuleId::blacks,  RuleId::stable_voting, RuleId::baldwin,
        RuleId::weak_nanson,  RuleId::kemeny_young};
    for (const RuleId id : all_rule_ids()) {
        const std::string name = to_string(id);
        const auto cell = [&](Axiom a) { return pass.cells.at({id, a}); };
        g.require(cell(Axiom::anonymity).ok && cell(Axiom::anonymity).pct == 100.0,
                  name + " anonymity " + fmt_fixed(cell(Axiom::anonymity).pct));
        g.require(cell(Axiom::pareto).ok && cell(Axiom::pareto).pct == 100.0,
                  name + " pareto " + fmt_fixed(cell(Axiom::pareto).pct));
        if (id == RuleId::instant_runoff_tb) {
            // index tie-breaking may legitimately break relabeling symmetry on
            // tie profiles; none are expected in an impartial-culture draw
            if (cell(Axiom::neutrality).pct != 100.0)
                g.note(name + " neutrality " + fmt_fixed(cell(Axiom::neutrality).pct) +
                       " (tie profiles, permitted)");
        } else {
            g.require(cell(Axiom::neutrality).ok && cell(Axiom::neutrality).pct == 100.0,
                      name + " neutrality " + fmt_fixed(cell(Axiom::neutrality).pct));
        }
        if (condorcet_consistent.count(id))
            g.require(cell(Axiom::condorcet).ok && cell(Axiom::condorcet).pct == 100.0,
                      name + " condorcet " + fmt_fixed(cell(Axiom::condorcet).pct));
    }
    g.require(pass.elapsed_s < 600.0,
              "sweep took " + fmt_fixed(pass.elapsed_s, 1) + " s (limit 600)");
    if (g.pass)
        g.note("16 rules x 5 axioms at 400 applicable each, " +
               fmt_fixed(pass.elapsed_s, 1) + " s single-threaded");
    return g;
}

Gate criterion2() {
    Gate g;
    struct Band {
        RuleId rule;
        Axiom axiom;
        double center, tol;
    };
    const Band bands[] = {
        {RuleId::plurality, Axiom::condorcet, 80.2, 4.0},
        {RuleId::borda, Axiom::condorcet, 95.5, 3.0},
        {RuleId::anti_plurality, Axiom::condorcet, 74.2, 5.0},
        {RuleId::plurality, Axiom::independence, 28.5, 6.0},
        {RuleId::borda, Axiom::independence, 37.2, 6.0},
        {RuleId::stable_voting, Axiom::independence, 43.0, 6.0},
        {RuleId::kemeny_young, Axiom::independence, 39.2, 6.0},
    };
    // The reference numbers carry ~2-point standard error from their own
    // 400-profile estimates; the bands absorb that. Our side is measured at
    // 20k applicable profiles so the comparison tests the implementation's
    // true satisfaction degree rather than one 400-sample draw.
    SatisfactionConfig sc;
    sc.target_applicable = 20000;
    sc.max_attempts = 20000000;
    std::string seen;
    for (const Band& b : bands) {
        std::cerr << "  measuring " << to_string(b.rule) << " " << to_string(b.axiom) << "\n";
        const uint64_t cell_seed =
            derive_seed(kSeed, 0xC2000000 ^ (uint64_t(b.rule) << 8) ^ uint64_t(b.axiom));
        const AxiomCell cell = axiom_cell(make_rule_function(b.rule), b.axiom, bench_spec(),
                                          cell_seed, sc);
        g.require(cell.ok && within(cell.pct, b.center, b.tol),
                  std::string(to_string(b.rule)) + " " + to_string(b.axiom) + " " +
                      fmt_fixed(cell.pct) + " outside " + fmt_fixed(b.center) + "+-" +
                      fmt_fixed(b.tol, 1));
        if (!seen.empty()) seen += ", ";
        seen += std::string(to_string(b.rule)) + " " + to_string(b.axiom) + " " +
                fmt_fixed(cell.pct);
    }
    if (g.pass) g.note(seen);
    return g;
}

Gate criterion3() {
    Gate g;
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, VotingFunction>> fns;
    std::map<RuleId, size_t> at;
    for (const RuleId id : all_rule_ids()) {
        at[id] = fns.size();
        fns.emplace_back(to_string(id), make_rule_function(id));
    }
    const SimilarityResult res = similarity_table(fns, bench_spec(), 10000, kSeed, &std::cerr);
    const double elapsed = seconds_since(t0);

    const double id_blacks_sv = res.identity[at[RuleId::blacks]][at[RuleId::stable_voting]];
    const double id_borda_blacks = res.identity[at[RuleId::borda]][at[RuleId::blacks]];
    const double sub_sv_copeland = res.subset[at[RuleId::stable_voting]][at[RuleId::copeland]];
    g.require(within(id_blacks_sv, 95.71, 1.5),
              "identity(blacks, stable_voting) " + fmt_fixed(id_blacks_sv));
    g.require(within(id_borda_blacks, 95.13, 1.5),
              "identity(borda, blacks) " + fmt_fixed(id_borda_blacks));
    g.require(within(sub_sv_copeland, 99.59, 0.8),
              "subset(stable_voting, copeland) " + fmt_fixed(sub_sv_copeland));
    for (size_t i = 0; i < fns.size(); ++i) {
        g.require(res.identity[i][i] == 100.0 && res.subset[i][i] == 100.0,
                  fns[i].first + " diagonal off 100");
        for (size_t j = 0; j < fns.size(); ++j)
            g.require(res.subset[i][j] >= res.identity[i][j],
                      fns[i].first + "->" + fns[j].first + " subset below identity");
    }
    g.require(elapsed < 1800.0, "took " + fmt_fixed(elapsed, 1) + " s (limit 1800)");

    ensure_dir(out_root + "/similarity");
    write_similarity_csv(out_root + "/similarity/identity.csv", res.names, res.identity);
    write_similarity_csv(out_root + "/similarity/subset.csv", res.names, res.subset);
    if (g.pass)
        g.note("blacks~stable_voting " + fmt_fixed(id_blacks_sv) + ", borda~blacks " +
               fmt_fixed(id_borda_blacks) + ", stable_voting<=copeland " +
               fmt_fixed(sub_sv_copeland) + ", " + fmt_fixed(elapsed, 1) + " s");
    return g;
}

Gate criterion4() {
    Gate g;
    int checked = 0;
    for (const auto& c : golden::cases()) {
        const Profile p = parse_profile(c.profile);
        for (const auto& [id, want] : c.expect) {
            ++checked;
            if (apply_rule(id, p) != want)
                g.require(false, std::string(to_string(id)) + " on " + c.profile);
        }
    }
    if (g.pass) g.note(std::to_string(checked) + " hand-tallied winning sets exact");
    return g;
}

// ---- criteria 5 and 6 share the trained models ----------------------------------

struct TrainedModel {
    Model model;
    double identity_pct;
    double train_s;
};

const TrainedModel& trained(Architecture arch) {
    static std::map<Architecture, TrainedModel> cache;
    const auto it = cache.find(arch);
    if (it != cache.end()) return it->second;

    TrainOptions o;
    o.rule = RuleId::plurality;
    o.spec = bench_spec();
    o.model.arch = arch;
    o.model.m_max = 5;
    o.model.n_max = 55;
    // The bar asks for at least 3,600 steps with each run under two hours.  The MLP
    // clears its floor right at the minimum; the CNN and WEC land mid-restart there
    // (the cosine schedule restarts at 1k/3k/7k), so they train to the 15k-step
    // cycle end — the same budget the reference tables use — well inside the bound.
    o.steps = arch == Architecture::mlp ? 3600 : 15000;
    o.batch = 200;
    o.seed = kSeed;
    std::cerr << "training " << to_string(arch) << " on plurality, " << o.steps
              << " steps\n";
    const auto t0 = std::chrono::steady_clock::now();
    Model model = train_supervised(o, nullptr, &std::cerr);
    const double train_s = seconds_since(t0);

    auto shared = std::make_shared<Model>(model.clone());
    const VotingFunction fn = make_voting_function(shared, DecoderKind::plain);
    const ModelEvalStats ev = evaluate_vs_rule(fn, make_rule_function(o.rule), o.spec,
                                               derive_seed(kSeed, 0x6576616C), 1000);
    std::cerr << to_string(arch) << ": identity " << fmt_fixed(ev.identity_pct) << " after "
              << fmt_fixed(train_s, 1) << " s\n";
    ensure_dir(out_root + "/exp1");
    save_model(model, out_root + "/exp1/" + to_string(arch) + ".ckpt",
               {{"rule", "plurality"}, {"distribution", "ic"}});
    return cache.emplace(arch, TrainedModel{std::move(model), ev.identity_pct, train_s})
        .first->second;
}

Gate criterion5() {
    Gate g;
    const struct {
        Architecture arch;
        double floor;
    } wanted[] = {{Architecture::mlp, 92.0},
                  {Architecture::cnn, 94.0},
                  {Architecture::wec, 95.0}};
    std::string seen;
    for (const auto& [arch, floor] : wanted) {
        const TrainedModel& tm = trained(arch);
        g.require(tm.identity_pct >= floor, std::string(to_string(arch)) + " identity " +
                                                fmt_fixed(tm.identity_pct) + " < " +
                                                fmt_fixed(floor, 0));
        g.require(tm.train_s < 7200.0, std::string(to_string(arch)) + " took " +
                                           fmt_fixed(tm.train_s, 0) + " s (limit 7200)");
        if (!seen.empty()) seen += ", ";
        seen += std::string(to_string(arch)) + " " + fmt_fixed(tm.identity_pct) + " (" +
                std::to_string(arch == Architecture::mlp ? 3600 : 15000) + " steps)";
    }
    if (g.pass) g.note("identity on held-out profiles: " + seen);
    return g;
}

Gate criterion6() {
    Gate g;
    std::string seen;
    for (const Architecture arch : {Architecture::mlp, Architecture::cnn}) {
        const TrainedModel& tm = trained(arch);
        auto shared = std::make_shared<Model>(tm.model.clone());
        const VotingFunction fn = make_voting_function(shared, DecoderKind::plain);
        const AxiomCell cell = axiom_cell(fn, Axiom::neutrality, bench_spec(),
                                          derive_seed(kSeed, 0x6E657574), {});
        g.require(tm.identity_pct > 90.0, std::string(to_string(arch)) + " identity " +
                                              fmt_fixed(tm.identity_pct) + " <= 90");
        g.require(cell.ok && cell.pct < 95.0,
                  std::string(to_string(arch)) + " neutrality " + fmt_fixed(cell.pct) +
                      " not below 95");
        if (!seen.empty()) seen += ", ";
        seen += std::string(to_string(arch)) + " neutrality " + fmt_fixed(cell.pct) +
                " at identity " + fmt_fixed(tm.identity_pct);
    }
    if (g.pass) g.note("accuracy without principles: " + seen);
    return g;
}

Gate criterion7() {
    Gate g;
    Exp3Options o;
    o.spec = bench_spec();
    o.model.arch = Architecture::wec;
    o.model.m_max = 5;
    o.model.n_max = 55;
    o.decoder = DecoderKind::navg;
    o.steps = 15000;
    o.batch = 200;
    o.seed = kSeed;
    o.out_dir = out_root + "/exp3";
    // objectives: no-winner, condorcet, pareto (the defaults)
    const auto t0 = std::chrono::steady_clock::now();
    const Exp3Result res = run_exp3(o, &std::cerr);
    const double elapsed = seconds_since(t0);

    std::map<Axiom, AxiomCell> cells;
    for (const auto& e : res.axioms) cells[e.axiom] = e.cell;
    const auto pct = [&](Axiom a) { return cells.at(a).ok ? cells.at(a).pct : -1.0; };

    g.require(cells.at(Axiom::anonymity).ok && pct(Axiom::anonymity) == 100.0,
              "anonymity " + fmt_fixed(pct(Axiom::anonymity)));
    g.require(cells.at(Axiom::neutrality).ok && pct(Axiom::neutrality) == 100.0,
              "neutrality " + fmt_fixed(pct(Axiom::neutrality)));
    g.require(cells.at(Axiom::pareto).ok && pct(Axiom::pareto) >= 99.0,
              "pareto " + fmt_fixed(pct(Axiom::pareto)) + " < 99");
    g.require(cells.at(Axiom::condorcet).ok && pct(Axiom::condorcet) >= 90.0,
              "condorcet " + fmt_fixed(pct(Axiom::condorcet)) + " < 90");
    g.require(res.output_stats.empty_pct < 1.0,
              "empty rate " + fmt_fixed(res.output_stats.empty_pct) + " >= 1");
    g.note("anonymity " + fmt_fixed(pct(Axiom::anonymity)) + ", neutrality " +
           fmt_fixed(pct(Axiom::neutrality)) + ", pareto " + fmt_fixed(pct(Axiom::pareto)) +
           ", condorcet " + fmt_fixed(pct(Axiom::condorcet)) + ", empty " +
           fmt_fixed(res.output_stats.empty_pct) + ", independence " +
           (cells.at(Axiom::independence).ok ? fmt_fixed(pct(Axiom::independence))
                                             : std::string("n/a")) +
           " (reported, not gated), " + fmt_fixed(elapsed, 1) + " s");
    return g;
}

Gate criterion8() {
    Gate g;
    using namespace votelab::nn;
    Rng init(kSeed);

    auto tens = [&](std::vector<int> shape) {
        Tensor t(std::move(shape));
        for (double& x : t.v) x = init.normal() * 0.5;
        return t;
    };
    auto check = [&](const std::string& name, const std::function<NodePtr()>& build,
                     const std::vector<NodePtr>& params) {
        const double err = max_fd_error(build, params, 1e-4, 30);
        g.require(err < 1e-4, name + " fd error " + fmt_fixed(err, 8));
    };

    {  // dense stack: linear -> relu -> linear
        auto W1 = parameter(tens({6, 4})), b1 = parameter(tens({6}));
        auto W2 = parameter(tens({1, 6})), b2 = parameter(tens({1}));
        auto x = parameter(tens({4}));
        check("linear/relu", [&] { return linear(W2, b2, relu(linear(W1, b1, x))); },
              {W1, b1, W2, b2, x});
    }
    {  // convolution pair with flatten
        auto K1 = parameter(tens({2, 3, 3, 1})), c1 = parameter(tens({2}));
        auto K2 = parameter(tens({2, 2, 1, 3})), c2 = parameter(tens({2}));
        auto W = parameter(tens({1, 2 * 4 * 3})), b = parameter(tens({1}));
        auto x = parameter(tens({3, 6, 5}));
        check("conv2d/flatten",
              [&] {
                  return linear(W, b, flatten(conv2d(K2, c2, relu(conv2d(K1, c1, x)))));
              },
              {K1, c1, K2, c2, W, b, x});
    }
    {  // embedding average and layer norm
        auto E = parameter(tens({7, 5}));
        auto gain = parameter(tens({5})), bias = parameter(tens({5}));
        auto W = parameter(tens({1, 5})), b = parameter(tens({1}));
        check("embedding_mean/layer_norm",
              [&] {
                  return linear(W, b, layer_norm(embedding_mean(E, {2, 4, 4, 6}), gain, bias));
              },
              {E, gain, bias, W, b});
    }
    {  // scalar heads over one logit vector
        auto z = parameter(tens({5}));
        const std::vector<double> target{1, 0, 0, 1, 0};
        const std::vector<char> mask{1, 1, 1, 0, 0};
        check("bce_with_logits", [&] { return bce_with_logits(z, target, mask); }, {z});
        check("kl_bernoulli_const", [&] { return kl_bernoulli_const(z, target, mask); }, {z});
        auto z2 = parameter(tens({5}));
        check("kl_bernoulli", [&] { return kl_bernoulli(z, z2, mask); }, {z, z2});
        check("sum_sigmoid_at", [&] { return sum_sigmoid_at(z, {0, 2, 2}); }, {z});
        check("mse_to_const", [&] { return mse_to_const(z, target); }, {z});
        auto zneg = parameter(tens({4}));
        for (double& x : zneg->val.v) x = -1.5 - init.uniform01();
        check("no_winner_hinge", [&] { return no_winner_hinge(zneg, 3); }, {zneg});
        check("weighted_sum/mean_scalars",
              [&] {
                  auto a = bce_with_logits(z, target, mask);
                  auto c = kl_bernoulli_const(z, target, mask);
                  return weighted_sum({mean_scalars({a, c}), a}, {0.7, 1.3});
              },
              {z});
    }

    // every training loss through each architecture
    for (const Architecture arch : {Architecture::mlp, Architecture::cnn, Architecture::wec}) {
        ModelConfig mc;
        mc.arch = arch;
        mc.m_max = 5;
        mc.n_max = arch == Architecture::cnn ? 5 : 4;
        mc.hidden = 12;
        mc.embedding_dim = 8;
        mc.cnn_channels = 4;
        if (arch == Architecture::mlp) mc.layer_norm = true;
        Model model(mc, derive_seed(kSeed, uint64_t(arch)));
        const Profile p = parse_profile(arch == Architecture::cnn
                                            ? "5;5;0,1,2,3,4|4,3,2,1,0|1,0,3,2,4|2,4,0,1,3|3,1,4,0,2"
                                            : "4;4;0,1,2,3|1,0,3,2|2,3,0,1|3,2,1,0");
        const std::string tag = to_string(arch);
        check(tag + " bce",
              [&] {
                  return loss_bce(model.logits(p), p, apply_rule(RuleId::borda, p),
                                  mc.m_max);
              },
              model.parameters());
        AxiomLossConfig all_on;
        all_on.independence = all_on.anonymity = true;
        all_on.anonymity_perms = 2;
        all_on.independence_pairs = 2;
        check(tag + " combined axiom loss",
              [&] { return combined_axiom_loss(model, p, Rng(7), all_on); },
              model.parameters());
    }

    // fuzz: losses stay finite and nonnegative
    ModelConfig mc;
    mc.arch = Architecture::mlp;
    mc.m_max = 4;
    mc.n_max = 6;
    mc.hidden = 16;
    Model model(mc, kSeed);
    Rng rng(derive_seed(kSeed, 0xF0));
    SampleSpec spec;
    spec.m_max = 4;
    spec.n_max = 6;
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const Profile p = sample_profile(rng, spec);
        AxiomLossConfig cfg;
        cfg.no_winner = rng.below(2) != 0;
        cfg.condorcet = rng.below(2) != 0;
        cfg.pareto = rng.below(2) != 0;
        cfg.independence = rng.below(2) != 0;
        cfg.anonymity = rng.below(2) != 0;
        cfg.anonymity_perms = 2;
        cfg.independence_pairs = 2;
        const auto parts = combined_axiom_loss_parts(model, p, rng.fork(i + 1), cfg);
        bool ok = std::isfinite(parts.total->val[0]) && parts.total->val[0] >= -1e-12;
        for (const auto& [name, node] : parts.parts)
            ok = ok && std::isfinite(node->val[0]) && node->val[0] >= -1e-12;
        const auto bce =
            loss_bce(model.logits(p), p, apply_rule(RuleId::plurality, p), mc.m_max);
        ok = ok && std::isfinite(bce->val[0]) && bce->val[0] >= 0.0;
        if (!ok) ++bad;
    }
    g.require(bad == 0, std::to_string(bad) + " of 10000 fuzz cases non-finite or negative");
    if (g.pass) g.note("all gradients within 1e-4 of central differences; 10000 fuzz cases clean");
    return g;
}

Gate criterion9() {
    Gate g;
    int64_t checked = 0, mismatches = 0;
    auto sweep = [&](const Profile& p) {
        for (const RuleId id : all_rule_ids()) {
            ++checked;
            if (apply_rule(id, p) != oracle::apply(id, p)) {
                ++mismatches;
                if (mismatches <= 3)
                    g.note(std::string(to_string(id)) + " differs on " + format_profile(p));
            }
        }
    };

    // every 3-voter profile over 3 alternatives
    const auto orders = all_permutations(3);
    for (const Ranking& r1 : orders)
        for (const Ranking& r2 : orders)
            for (const Ranking& r3 : orders) {
                Profile p;
                p.m = 3;
                p.rankings = {r1, r2, r3};
                sweep(p);
            }

    Rng rng(derive_seed(kSeed, 0x9C));
    for (int i = 0; i < 10000; ++i) {
        Profile p;
        p.m = 1 + static_cast<int>(rng.below(4));
        const int n = 1 + static_cast<int>(rng.below(5));
        for (int v = 0; v < n; ++v) p.rankings.push_back(sample_ranking_ic(rng, p.m));
        sweep(p);
    }
    g.require(mismatches == 0, std::to_string(mismatches) + " oracle mismatches");
    if (g.pass)
        g.note(std::to_string(checked) + " rule evaluations match the reference tallies");
    return g;
}

Gate criterion10() {
    Gate g;
    g.note("reporting-only outputs (trained tables, per-run sigmoid values) are not gated; "
           "the 7-alternative/77-voter grid is opt-in via presets/grid_7x77.cfg");
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criteria") == 0 && i + 1 < argc) {
            std::stringstream ss(argv[++i]);
            std::string tok;
            while (std::getline(ss, tok, ',')) selected.insert(std::stoi(tok));
        } else if (std::strcmp(argv[i], "--out") == 0 && i + 1 < argc) {
            out_root = argv[++i];
        } else {
            std::cerr << "usage: acceptance [--criteria 1,2,...] [--out dir]\n";
            return 2;
        }
    }
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    const std::map<int, Gate (*)()> criteria = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
        {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
        {9, criterion9}, {10, criterion10}};

    bool all_pass = true;
    for (const int c : selected) {
        const auto it = criteria.find(c);
        if (it == criteria.end()) {
            std::cerr << "unknown criterion " << c << "\n";
            return 2;
        }
        Gate g;
        try {
            g = it->second();
        } catch (const std::exception& e) {
            g.pass = false;
            g.note(std::string("exception: ") + e.what());
        }
        std::printf("criterion %d: %s — %s\n", c, g.pass ? "PASS" : "FAIL", g.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && g.pass;
    }
    return all_pass ? 0 : 1;
}
