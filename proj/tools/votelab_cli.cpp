// Command-line front end: sampling, rule evaluation, model training and the
// full experiment suite. Every run takes its settings from (config file,
// seed) plus a few convenience flags, and writes a manifest of the resolved
// values next to its outputs so results can be reproduced exactly.

#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "votelab/harness.hpp"

using namespace votelab;

namespace {

// Config reader that remembers every key it resolved (for the manifest).
struct Resolver {
    Config cfg;
    Config used;

    std::string str(const std::string& key, const std::string& def) {
        const std::string v = config_get(cfg, key, def);
        used[key] = v;
        return v;
    }
    int geti(const std::string& key, int def) {
        return std::stoi(str(key, std::to_string(def)));
    }
    int64_t geti64(const std::string& key, int64_t def) {
        return std::stoll(str(key, std::to_string(def)));
    }
    double getd(const std::string& key, double def) {
        return std::stod(str(key, fmt_fixed(def, 6)));
    }
    bool getb(const std::string& key, bool def) {
        const std::string v = str(key, def ? "true" : "false");
        if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
        if (v == "0" || v == "false" || v == "off" || v == "no") return false;
        throw std::invalid_argument("config key " + key + " is not a boolean: " + v);
    }

    // Call once a subcommand has resolved everything it understands: any key
    // still untouched is a typo or belongs to a different subcommand.
    void reject_unknown() const {
        std::string bad;
        for (const auto& [key, value] : cfg)
            if (!used.count(key)) bad += (bad.empty() ? "" : ", ") + key;
        if (!bad.empty())
            throw std::invalid_argument("unknown config key(s): " + bad);
    }
};

SampleSpec resolve_spec(Resolver& r) {
    SampleSpec spec;
    spec.m_min = r.geti("sample.m_min", 1);
    spec.m_max = r.geti("sample.m_max", 5);
    spec.n_min = r.geti("sample.n_min", 1);
    spec.n_max = r.geti("sample.n_max", 55);
    spec.dist = distribution_from_string(r.str("dist.kind", "ic"));
    if (r.cfg.count("dist.mallows_rel_phi"))
        spec.mallows_rel_phi = r.getd("dist.mallows_rel_phi", 0.5);
    return spec;
}

ModelConfig resolve_model(Resolver& r, const SampleSpec& spec) {
    ModelConfig mc;
    mc.arch = architecture_from_string(r.str("model.arch", "mlp"));
    mc.m_max = r.geti("model.m_max", spec.m_max);
    mc.n_max = r.geti("model.n_max", spec.n_max);
    mc.hidden = r.geti("model.hidden", 128);
    mc.hidden_layers = r.geti("model.hidden_layers", 2);
    mc.layer_norm = r.getb("model.layer_norm", false);
    mc.cnn_channels = r.geti("model.cnn_channels", 0);
    mc.embedding_dim = r.geti("model.embedding_dim", 0);
    mc.kt_reorder = kt_reorder_from_string(r.str("model.kt_reorder", "off"));
    return mc;
}

LrSchedule resolve_schedule(Resolver& r) {
    LrSchedule s;
    s.enabled = r.getb("train.schedule", true);
    s.base_lr = r.getd("train.lr", 1e-3);
    s.t0 = r.geti64("train.t0", 1000);
    s.t_mult = r.geti64("train.t_mult", 2);
    s.eta_min = r.getd("train.eta_min", 0.0);
    return s;
}

TrainOptions resolve_train(Resolver& r, uint64_t seed, int default_steps = 15000) {
    TrainOptions o;
    o.rule = rule_from_string(r.str("train.rule", "plurality"));
    o.spec = resolve_spec(r);
    o.model = resolve_model(r, o.spec);
    o.steps = r.geti("train.steps", default_steps);
    o.batch = r.geti("train.batch", 200);
    o.schedule = resolve_schedule(r);
    o.seed = seed;
    o.w2v = r.getb("w2v.enable", true);
    o.w2v_profiles = r.geti("w2v.profiles", 20000);
    o.w2v_window = r.geti("w2v.window", 5);
    o.w2v_epochs = r.geti("w2v.epochs", 5);
    o.log_every = r.geti("train.log_every", 50);
    return o;
}

SatisfactionConfig resolve_sat(Resolver& r, int default_target = 400) {
    SatisfactionConfig sc;
    sc.target_applicable = r.geti("eval.axiom_target", default_target);
    sc.max_attempts = r.geti64("eval.max_attempts", 1000 * int64_t(sc.target_applicable));
    return sc;
}

std::vector<std::pair<std::string, VotingFunction>> rule_set(const std::string& which) {
    std::vector<std::pair<std::string, VotingFunction>> fns;
    if (which == "all") {
        for (const RuleId id : all_rule_ids())
            fns.emplace_back(to_string(id), make_rule_function(id));
        return fns;
    }
    std::stringstream ss(which);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const RuleId id = rule_from_string(cfgdetail::trim(tok));
        fns.emplace_back(to_string(id), make_rule_function(id));
    }
    if (fns.empty()) throw std::invalid_argument("no rules selected");
    return fns;
}

std::vector<Axiom> axiom_set(const std::string& which) {
    if (which == "all") return default_axiom_list();
    std::vector<Axiom> out;
    std::stringstream ss(which);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(axiom_from_string(cfgdetail::trim(tok)));
    if (out.empty()) throw std::invalid_argument("no axioms selected");
    return out;
}

AxiomLossConfig resolve_objectives(Resolver& r) {
    AxiomLossConfig c;
    c.no_winner = c.condorcet = c.pareto = c.independence = c.anonymity = false;
    std::stringstream ss(r.str("objectives", "nw,condorcet,pareto"));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const std::string t = cfgdetail::trim(tok);
        if (t == "nw" || t == "no_winner") c.no_winner = true;
        else if (t == "condorcet") c.condorcet = true;
        else if (t == "pareto") c.pareto = true;
        else if (t == "independence") c.independence = true;
        else if (t == "anonymity") c.anonymity = true;
        else throw std::invalid_argument("unknown objective: " + t);
    }
    c.weight_no_winner = r.getd("weight.no_winner", 1.0);
    c.weight_condorcet = r.getd("weight.condorcet", 1.0);
    c.weight_pareto = r.getd("weight.pareto", 1.0);
    c.weight_independence = r.getd("weight.independence", 1.0);
    c.weight_anonymity = r.getd("weight.anonymity", 1.0);
    c.anonymity_perms = r.geti("loss.anonymity_perms", 10);
    c.independence_pairs = r.geti("loss.independence_pairs", 5);
    return c;
}

std::vector<double> parse_grid(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(cfgdetail::trim(tok)));
    return out;
}

void finish_manifest(Resolver& r, const std::string& out_dir, const std::string& command,
                     uint64_t seed) {
    if (out_dir.empty()) return;
    ensure_dir(out_dir);
    r.used["command"] = command;
    r.used["seed"] = std::to_string(seed);
    write_manifest(out_dir, r.used);
}

VotingFunction load_model_function(const std::string& path, DecoderKind decode, uint64_t seed) {
    auto model = std::make_shared<Model>(load_model(path));
    return make_voting_function(model, decode, derive_seed(seed, 0x6E616176));
}

void print_axiom_entries(const std::vector<AxiomTableEntry>& entries) {
    for (const auto& e : entries)
        std::cout << e.name << "  " << to_string(e.axiom) << "  " << to_string(e.dist) << "  "
                  << (e.cell.ok ? fmt_fixed(e.cell.pct) : "n/a") << " ("
                  << (e.cell.ok ? std::to_string(e.cell.applicable) : "-") << " applicable)\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voting-rule laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    uint64_t seed = 1;
    std::string config_path, out_dir;
    std::vector<std::string> sets;
    app.add_option("--seed", seed, "master random seed");
    app.add_option("--config", config_path, "key = value settings file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", sets, "override a config key, e.g. --set train.steps=500");

    // shared convenience flags (each writes through to a config key)
    int count = -1;
    std::string dist_flag, rule_flag, arch_flag, decode_flag, model_path;
    int m_max_flag = -1, n_max_flag = -1, steps_flag = -1, batch_flag = -1;

    auto add_spec_flags = [&](CLI::App* cmd) {
        cmd->add_option("--dist", dist_flag, "ic, mallows, urn_r or euclidean");
        cmd->add_option("--max-alternatives", m_max_flag, "largest number of alternatives");
        cmd->add_option("--max-voters", n_max_flag, "largest number of voters");
    };
    auto add_train_flags = [&](CLI::App* cmd) {
        add_spec_flags(cmd);
        cmd->add_option("--arch", arch_flag, "mlp, cnn or wec");
        cmd->add_option("--rule", rule_flag, "teacher rule");
        cmd->add_option("--steps", steps_flag, "training steps");
        cmd->add_option("--batch", batch_flag, "batch size");
        cmd->add_option("--decode", decode_flag, "plain, navg or naavg");
    };

    auto* c_sample = app.add_subcommand("sample", "draw preference profiles");
    c_sample->add_option("--count", count, "number of profiles");
    c_sample->add_option("--rule", rule_flag, "label profiles with this rule");
    add_spec_flags(c_sample);

    auto* c_rule_eval = app.add_subcommand("rule-eval", "axiom satisfaction of voting rules");
    c_rule_eval->add_option("--rule", rule_flag, "rule name, list, or 'all'");
    c_rule_eval->add_option("--count", count, "applicable profiles per axiom");
    std::string axioms_flag = "all";
    c_rule_eval->add_option("--axiom", axioms_flag, "axiom name, list, or 'all'");
    add_spec_flags(c_rule_eval);

    auto* c_train = app.add_subcommand("train", "supervised training on fresh batches");
    add_train_flags(c_train);

    auto* c_model_eval = app.add_subcommand("model-eval", "score a checkpoint against a rule");
    c_model_eval->add_option("--model", model_path, "checkpoint path")->required();
    c_model_eval->add_option("--count", count, "evaluation profiles");
    std::string me_axioms = "all";
    c_model_eval->add_option("--axiom", me_axioms, "axiom name, list, 'all' or 'none'");
    add_train_flags(c_model_eval);

    auto* c_exp1 = app.add_subcommand("exp1", "train, then compare to the rule");
    add_train_flags(c_exp1);

    auto* c_exp2 = app.add_subcommand("exp2", "augmented versus sampled data");
    int exp2_version = 0;
    c_exp2->add_option("--version", exp2_version, "1 = branch study, 2 = percentage sweep");
    add_train_flags(c_exp2);

    auto* c_exp3 = app.add_subcommand("exp3", "unsupervised training on axiom losses");
    bool ablation = false;
    c_exp3->add_flag("--ablation", ablation, "sweep objective subsets");
    add_train_flags(c_exp3);

    auto* c_sim = app.add_subcommand("similarity", "pairwise agreement of rules");
    c_sim->add_option("--count", count, "profiles to compare on");
    std::string sim_rules = "all";
    c_sim->add_option("--rules", sim_rules, "rule list or 'all'");
    c_sim->add_option("--model", model_path, "optional checkpoint to include");
    c_sim->add_option("--decode", decode_flag, "decoder for the checkpoint");
    add_spec_flags(c_sim);

    auto* c_disagree = app.add_subcommand("disagree", "hunt for disagreeing profiles");
    c_disagree->add_option("--model", model_path, "candidate checkpoint");
    std::string cand_rule, dis_mode = "weak", dis_rules = "all";
    c_disagree->add_option("--candidate-rule", cand_rule, "candidate rule instead of a model");
    c_disagree->add_option("--mode", dis_mode, "weak or strong");
    c_disagree->add_option("--rules", dis_rules, "reference rules");
    c_disagree->add_option("--scan", count, "profiles to scan");
    c_disagree->add_option("--decode", decode_flag, "decoder for the checkpoint");
    add_spec_flags(c_disagree);

    auto* c_crossval = app.add_subcommand("crossval", "k-fold cross-validation");
    std::string dataset_path;
    c_crossval->add_option("--dataset", dataset_path, "labeled dataset file");
    int folds_flag = -1, epochs_flag = -1;
    c_crossval->add_option("--folds", folds_flag, "fold count");
    c_crossval->add_option("--epochs", epochs_flag, "epochs per fold");
    c_crossval->add_option("--count", count, "dataset size when generating");
    add_train_flags(c_crossval);

    CLI11_PARSE(app, argc, argv);

    try {
        Resolver r;
        if (!config_path.empty()) r.cfg = load_config_file(config_path);
        // convenience flags override the config file; an explicit --set wins
        // over everything (applied last)
        if (!dist_flag.empty()) r.cfg["dist.kind"] = dist_flag;
        if (m_max_flag > 0) r.cfg["sample.m_max"] = std::to_string(m_max_flag);
        if (n_max_flag > 0) r.cfg["sample.n_max"] = std::to_string(n_max_flag);
        if (!arch_flag.empty()) r.cfg["model.arch"] = arch_flag;
        if (!rule_flag.empty()) r.cfg["train.rule"] = rule_flag;
        if (steps_flag > 0) r.cfg["train.steps"] = std::to_string(steps_flag);
        if (batch_flag > 0) r.cfg["train.batch"] = std::to_string(batch_flag);
        if (!decode_flag.empty()) r.cfg["decode"] = decode_flag;
        if (count > 0 && app.got_subcommand(c_rule_eval))
            r.cfg["eval.axiom_target"] = std::to_string(count);
        if (count > 0 && app.got_subcommand(c_model_eval))
            r.cfg["eval.profiles"] = std::to_string(count);
        if (count > 0 && app.got_subcommand(c_sim))
            r.cfg["similarity.profiles"] = std::to_string(count);
        if (count > 0 && app.got_subcommand(c_disagree))
            r.cfg["disagree.scan"] = std::to_string(count);
        if (count > 0 && app.got_subcommand(c_crossval))
            r.cfg["crossval.size"] = std::to_string(count);
        if (folds_flag > 0) r.cfg["crossval.folds"] = std::to_string(folds_flag);
        if (epochs_flag > 0) r.cfg["crossval.epochs"] = std::to_string(epochs_flag);
        if (exp2_version > 0) r.cfg["exp2.version"] = std::to_string(exp2_version);
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set needs key=value, got: " + s);
            r.cfg[cfgdetail::trim(s.substr(0, eq))] = cfgdetail::trim(s.substr(eq + 1));
        }

        if (app.got_subcommand(c_sample)) {
            const SampleSpec spec = resolve_spec(r);
            const int n = count > 0 ? count : 10;
            if (!rule_flag.empty()) {
                const RuleId rule = rule_from_string(r.str("train.rule", "borda"));
                r.reject_unknown();
                const Dataset ds = generate_dataset(rule, spec, n, seed);
                if (out_dir.empty()) {
                    for (const auto& lp : ds.items)
                        std::cout << format_dataset_line(lp) << "\n";
                } else {
                    ensure_dir(out_dir);
                    save_dataset(ds, (std::filesystem::path(out_dir) / "dataset.txt").string());
                    r.used["count"] = std::to_string(n);
                    finish_manifest(r, out_dir, "sample", seed);
                    std::cout << "wrote " << n << " labeled pairs to " << out_dir
                              << "/dataset.txt\n";
                }
            } else {
                r.reject_unknown();
                Rng rng(seed);
                for (int i = 0; i < n; ++i)
                    std::cout << format_profile(sample_profile(rng, spec)) << "\n";
            }
            return 0;
        }

        if (app.got_subcommand(c_rule_eval)) {
            const SampleSpec spec = resolve_spec(r);
            const SatisfactionConfig sc = resolve_sat(r);
            const auto fns = rule_set(rule_flag.empty() ? "all" : rule_flag);
            const auto axs = axiom_set(axioms_flag);
            r.reject_unknown();
            const auto table = axiom_table(fns, axs, {spec.dist}, spec, seed, sc);
            print_axiom_entries(table);
            if (!out_dir.empty()) {
                ensure_dir(out_dir);
                write_axiom_csv((std::filesystem::path(out_dir) / "axioms.csv").string(), table);
                finish_manifest(r, out_dir, "rule-eval", seed);
            }
            return 0;
        }

        if (app.got_subcommand(c_train)) {
            TrainOptions o = resolve_train(r, seed);
            r.reject_unknown();
            std::vector<TrainLogRow> log;
            const Model model = train_supervised(o, &log, &std::cout);
            const std::string dir = out_dir.empty() ? "out/train" : out_dir;
            ensure_dir(dir);
            save_model(model, (std::filesystem::path(dir) / "model.ckpt").string(),
                       {{"rule", to_string(o.rule)},
                        {"distribution", to_string(o.spec.dist)}});
            std::vector<std::vector<std::string>> rows;
            for (const auto& row : log)
                rows.push_back({std::to_string(row.step), fmt_fixed(row.loss, 6),
                                fmt_fixed(row.lr, 8)});
            write_csv((std::filesystem::path(dir) / "train_log.csv").string(), "step,loss,lr",
                      rows);
            finish_manifest(r, dir, "train", seed);
            std::cout << "checkpoint: " << dir << "/model.ckpt\n";
            return 0;
        }

        if (app.got_subcommand(c_model_eval)) {
            const SampleSpec spec = resolve_spec(r);
            const DecoderKind decode = decoder_from_string(r.str("decode", "plain"));
            const RuleId rule = rule_from_string(r.str("train.rule", "plurality"));
            const VotingFunction fn = load_model_function(model_path, decode, seed);
            const int n = r.geti("eval.profiles", 1000);
            SatisfactionConfig msc;
            if (me_axioms != "none") msc = resolve_sat(r);
            r.reject_unknown();
            const ModelEvalStats ev = evaluate_vs_rule(fn, make_rule_function(rule), spec,
                                                       derive_seed(seed, 0x6576616C), n);
            std::cout << "identity " << fmt_fixed(ev.identity_pct) << "  subset "
                      << fmt_fixed(ev.subset_pct) << "  empty " << fmt_fixed(ev.empty_pct)
                      << "  mean set size " << fmt_fixed(ev.mean_set_size, 3) << "\n";
            std::vector<AxiomTableEntry> table;
            if (me_axioms != "none") {
                table = axiom_table({{"model", fn}}, axiom_set(me_axioms), {spec.dist}, spec,
                                    derive_seed(seed, 0x6576616C), msc);
                print_axiom_entries(table);
            }
            if (!out_dir.empty()) {
                ensure_dir(out_dir);
                write_csv((std::filesystem::path(out_dir) / "model_eval.csv").string(),
                          "metric,value",
                          {{"identity_accuracy", fmt_fixed(ev.identity_pct)},
                           {"subset_accuracy", fmt_fixed(ev.subset_pct)},
                           {"empty_rate", fmt_fixed(ev.empty_pct)},
                           {"mean_set_size", fmt_fixed(ev.mean_set_size, 3)}});
                if (!table.empty())
                    write_axiom_csv((std::filesystem::path(out_dir) / "axioms.csv").string(),
                                    table);
                finish_manifest(r, out_dir, "model-eval", seed);
            }
            return 0;
        }

        if (app.got_subcommand(c_exp1)) {
            Exp1Options o;
            o.train = resolve_train(r, seed);
            o.decoder = decoder_from_string(r.str("decode", "plain"));
            o.eval_profiles = r.geti("eval.profiles", 1000);
            o.sat = resolve_sat(r);
            o.out_dir = out_dir.empty() ? "out/exp1" : out_dir;
            r.reject_unknown();
            const Exp1Result res = run_exp1(o, &std::cout);
            for (const auto& row : res.rows)
                std::cout << row.metric << ": rule " << fmt_fixed(row.rule_value) << "  model "
                          << (row.ok ? fmt_fixed(row.model_value) : "n/a") << "  relative "
                          << (row.ok ? fmt_fixed(row.relative()) : "n/a") << "\n";
            finish_manifest(r, o.out_dir, "exp1", seed);
            return 0;
        }

        if (app.got_subcommand(c_exp2)) {
            const int version = r.geti("exp2.version", 1);
            const AugmentKind aug = augment_from_string(r.str("exp2.augment", "neutrality"));
            const Axiom target = axiom_from_string(r.str(
                "exp2.target_axiom",
                aug == AugmentKind::anonymity ? "anonymity" : "neutrality"));
            if (version == 1) {
                Exp2V1Options o;
                o.train = resolve_train(r, seed, 5000);
                o.pretrain_steps = r.geti("exp2.pretrain_steps", 500);
                o.initial_size = r.geti("exp2.initial_size", 10000);
                o.eval_every = r.geti("exp2.eval_every", 250);
                o.augment = aug;
                o.target_axiom = target;
                o.eval_profiles = r.geti("eval.profiles", 1000);
                o.sat = resolve_sat(r, 100);
                o.out_dir = out_dir.empty() ? "out/exp2_v1" : out_dir;
                r.reject_unknown();
                const Exp2V1Result res = run_exp2_v1(o, &std::cout);
                std::cout << "fresh pairs after the fork: augmented "
                          << res.fresh_after_fork_augmented << ", sampled "
                          << res.fresh_after_fork_sampled << "\n";
                finish_manifest(r, o.out_dir, "exp2", seed);
            } else if (version == 2) {
                Exp2V2Options o;
                o.train = resolve_train(r, seed, 5000);
                o.p_grid = parse_grid(r.str("exp2.p_grid", "5,10,25,50,100"));
                o.augment = aug;
                o.target_axiom = target;
                o.eval_profiles = r.geti("eval.profiles", 1000);
                o.sat = resolve_sat(r, 100);
                o.out_dir = out_dir.empty() ? "out/exp2_v2" : out_dir;
                r.reject_unknown();
                const Exp2V2Result res = run_exp2_v2(o, &std::cout);
                for (const auto& row : res.rows)
                    std::cout << "p=" << fmt_compact(row.p) << "  identity "
                              << fmt_fixed(row.eval.identity_pct) << "  subset "
                              << fmt_fixed(row.eval.subset_pct) << "\n";
                finish_manifest(r, o.out_dir, "exp2", seed);
            } else {
                throw std::invalid_argument("exp2 version must be 1 or 2");
            }
            return 0;
        }

        if (app.got_subcommand(c_exp3)) {
            Exp3Options o;
            o.spec = resolve_spec(r);
            if (!r.cfg.count("model.arch")) r.cfg["model.arch"] = "wec";
            o.model = resolve_model(r, o.spec);
            o.objectives = resolve_objectives(r);
            o.decoder = decoder_from_string(r.str("decode", "navg"));
            o.steps = r.geti("train.steps", 15000);
            o.batch = r.geti("train.batch", 200);
            o.schedule = resolve_schedule(r);
            o.seed = seed;
            o.w2v = r.getb("w2v.enable", true);
            o.w2v_profiles = r.geti("w2v.profiles", 20000);
            o.eval_profiles = r.geti("eval.profiles", 1000);
            o.sat = resolve_sat(r);
            o.out_dir = out_dir.empty() ? (ablation ? "out/exp3_ablation" : "out/exp3") : out_dir;
            const bool run_ablation = ablation || r.getb("exp3.ablation", false);
            r.reject_unknown();
            if (run_ablation) {
                const auto rows = run_exp3_ablation(o, &std::cout);
                for (const auto& row : rows) {
                    std::cout << row.subset << ":";
                    for (const auto& [axiom, cell] : row.axioms)
                        std::cout << "  " << to_string(axiom) << " "
                                  << (cell.ok ? fmt_fixed(cell.pct) : "n/a");
                    std::cout << "  empty " << fmt_fixed(row.empty_pct) << "\n";
                }
            } else {
                const Exp3Result res = run_exp3(o, &std::cout);
                print_axiom_entries(res.axioms);
                std::cout << "empty rate " << fmt_fixed(res.output_stats.empty_pct)
                          << "  mean set size "
                          << fmt_fixed(res.output_stats.mean_set_size, 3) << "\n";
            }
            finish_manifest(r, o.out_dir, "exp3", seed);
            return 0;
        }

        if (app.got_subcommand(c_sim)) {
            const SampleSpec spec = resolve_spec(r);
            auto fns = rule_set(sim_rules);
            if (!model_path.empty()) {
                const DecoderKind decode = decoder_from_string(r.str("decode", "plain"));
                fns.emplace_back("model", load_model_function(model_path, decode, seed));
            }
            const int n = r.geti("similarity.profiles", 10000);
            r.reject_unknown();
            const SimilarityResult res = similarity_table(fns, spec, n, seed, &std::cout);
            const std::string dir = out_dir.empty() ? "out/similarity" : out_dir;
            ensure_dir(dir);
            write_similarity_csv((std::filesystem::path(dir) / "identity.csv").string(),
                                 res.names, res.identity);
            write_similarity_csv((std::filesystem::path(dir) / "subset.csv").string(),
                                 res.names, res.subset);
            finish_manifest(r, dir, "similarity", seed);
            std::cout << "wrote identity.csv and subset.csv to " << dir << "\n";
            return 0;
        }

        if (app.got_subcommand(c_disagree)) {
            const SampleSpec spec = resolve_spec(r);
            VotingFunction candidate;
            std::string cand_name;
            if (!model_path.empty()) {
                const DecoderKind decode = decoder_from_string(r.str("decode", "plain"));
                candidate = load_model_function(model_path, decode, seed);
                cand_name = "model";
            } else if (!cand_rule.empty()) {
                candidate = make_rule_function(rule_from_string(cand_rule));
                cand_name = cand_rule;
            } else {
                throw std::invalid_argument("disagree needs --model or --candidate-rule");
            }
            const auto rules = rule_set(dis_rules);
            const int n = r.geti("disagree.scan", 10000);
            const DisagreeMode mode = disagree_mode_from_string(r.str("disagree.mode", dis_mode));
            r.reject_unknown();
            const DisagreeResult res =
                find_disagreeing_profile(candidate, rules, spec, mode, seed, n);
            const std::string report = format_disagreement(res, cand_name);
            std::cout << to_string(mode) << " disagreement: " << report;
            if (!out_dir.empty()) {
                ensure_dir(out_dir);
                std::ofstream(std::filesystem::path(out_dir) / "disagree.txt") << report;
                finish_manifest(r, out_dir, "disagree", seed);
            }
            return 0;
        }

        if (app.got_subcommand(c_crossval)) {
            CrossValOptions o;
            std::vector<LabeledProfile> data;
            if (!dataset_path.empty()) {
                if (r.cfg.count("crossval.size"))
                    throw std::invalid_argument(
                        "--dataset provides the data; --count/crossval.size conflicts with it");
                data = load_dataset(dataset_path).items;
                r.used["crossval.dataset"] = dataset_path;
                SampleSpec spec = resolve_spec(r);
                o.spec = spec;
            } else {
                const RuleId rule = rule_from_string(r.str("train.rule", "plurality"));
                const int n = r.geti("crossval.size", 10000);
                o.spec = resolve_spec(r);
                data = generate_dataset(rule, o.spec, n, derive_seed(seed, 0x64730000)).items;
            }
            o.model = resolve_model(r, o.spec);
            o.folds = r.geti("crossval.folds", 10);
            o.epochs = r.geti("crossval.epochs", 8);
            o.batch = r.geti("train.batch", 200);
            o.schedule = resolve_schedule(r);
            o.seed = seed;
            o.w2v = r.getb("w2v.enable", true);
            o.w2v_profiles = r.geti("w2v.profiles", 20000);
            o.out_dir = out_dir.empty() ? "out/crossval" : out_dir;
            r.reject_unknown();
            const CrossValResult res = cross_validate(o, data, &std::cout);
            std::cout << "test accuracy " << fmt_fixed(res.mean.test_acc) << " +- "
                      << fmt_fixed(res.stddev.test_acc) << "\n";
            finish_manifest(r, o.out_dir, "crossval", seed);
            return 0;
        }

        throw std::logic_error("no subcommand dispatched");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
