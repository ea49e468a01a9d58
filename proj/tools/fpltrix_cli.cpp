#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpltrix/audits.hpp"
#include "fpltrix/config.hpp"
#include "fpltrix/decision_set.hpp"
#include "fpltrix/environment.hpp"
#include "fpltrix/errors.hpp"
#include "fpltrix/experiment.hpp"
#include "fpltrix/export.hpp"
#include "fpltrix/schedule.hpp"

using namespace fpltrix;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitAuditFailed = 3;

int report_error(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}}.dump(2)
              << '\n';
    return code;
}

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";
    std::optional<std::size_t> replications;
    bool format_given = false;
};

// Flat key/value rendering for --format csv.
void print_flat(const json& doc, const std::string& prefix, std::ostream& os) {
    if (doc.is_object()) {
        for (const auto& [k, v] : doc.items()) print_flat(v, prefix.empty() ? k : prefix + "." + k, os);
    } else if (doc.is_array() && !doc.empty() && doc.front().is_structured()) {
        for (std::size_t i = 0; i < doc.size(); ++i) print_flat(doc[i], prefix + "." + std::to_string(i), os);
    } else {
        os << prefix << ',' << (doc.is_string() ? doc.get<std::string>() : doc.dump()) << '\n';
    }
}

void emit(const json& doc, const Common& c, const std::string& file_stem) {
    if (c.format == "csv") {
        std::cout << "key,value\n";
        print_flat(doc, "", std::cout);
    } else {
        std::cout << doc.dump(2) << '\n';
    }
    if (!c.out.empty()) {
        std::filesystem::create_directories(c.out);
        write_json(std::filesystem::path(c.out) / (file_stem + ".json"), doc);
    }
}

int cmd_run(const Common& c, std::optional<std::size_t> jobs) {
    if (c.config.empty()) throw ConfigError("run needs --config");
    ExperimentConfig cfg = load_config(c.config);
    if (c.seed) cfg.seed = *c.seed;
    if (c.replications) cfg.replications = *c.replications;
    if (!c.out.empty()) cfg.output.dir = c.out;
    if (c.format_given) cfg.output.format = c.format;
    if (jobs) cfg.jobs = *jobs;
    if (cfg.replications == 0) throw ConfigError("--replications must be positive");

    const ExperimentResult result = run_experiment(cfg);
    export_experiment(result, cfg.output.dir, cfg.output.format);

    const auto& a = result.aggregate;
    json brief = {{"out", cfg.output.dir},
                  {"completed", a.completed},
                  {"replications", cfg.replications},
                  {"mean_regret", a.mean_regret},
                  {"stderr_regret", a.stderr_regret},
                  {"mean_lstar", a.mean_lstar},
                  {"mean_bound", a.mean_bound}};
    std::cout << brief.dump(2) << '\n';

    for (const auto& rep : result.replications) {
        if (rep.error) {
            return report_error(rep.error->kind,
                                "replication " + std::to_string(rep.index) + ": " + rep.error->message,
                                kExitFailure);
        }
    }
    for (const auto& rep : result.replications) {
        if (rep.lemma2 && !rep.lemma2->pass) {
            return report_error("audit_failed",
                                "lemma2 audit failed in replication " + std::to_string(rep.index),
                                kExitAuditFailed);
        }
    }
    return 0;
}

struct AuditArgs {
    std::size_t d = 3;
    std::size_t m = 1;
    double bound = 2.0;
    std::size_t samples = 100000;
    std::size_t snapshots = 20;
    std::string lemma2_file;
};

int cmd_audit(const Common& c, const AuditArgs& a) {
    const std::uint64_t seed = c.seed.value_or(0);
    json reports = json::array();
    bool all_pass = true;
    auto add = [&](const AuditReport& r) {
        all_pass = all_pass && r.pass;
        reports.push_back(r.to_json());
    };

    if (!a.lemma2_file.empty()) {
        // {"decision_set": ..., "hat_loss": [...], "eta": .., "gamma": .., "B": .., "D": optional}
        const json doc = read_json(a.lemma2_file);
        try {
            const auto set = doc.at("decision_set").is_string()
                                 ? parse_set_descriptor(doc.at("decision_set").get<std::string>())
                                 : make_decision_set(doc.at("decision_set"));
            Lemma2Input in;
            in.hat_loss = doc.at("hat_loss").get<std::vector<double>>();
            in.last.eta = doc.at("eta").get<double>();
            in.last.gamma = doc.at("gamma").get<double>();
            in.last.bound = doc.at("B").get<double>();
            in.D = doc.value("D", exploration_constant(set->dim(), set->max_weight()));
            add(audit_lemma2(in, *set));
        } catch (const json::exception& e) {
            throw InputError("lemma2 input '" + a.lemma2_file + "': " + e.what());
        }
    } else if (!c.config.empty()) {
        ExperimentConfig cfg = load_config(c.config);
        if (c.seed) cfg.seed = *c.seed;
        if (c.replications) cfg.replications = *c.replications;
        const ExperimentResult result = run_experiment(cfg);
        for (const auto& rep : result.replications) {
            if (rep.error) {
                return report_error(rep.error->kind,
                                    "replication " + std::to_string(rep.index) + ": " +
                                        rep.error->message,
                                    kExitFailure);
            }
            if (rep.lemma2) add(*rep.lemma2);
        }
    } else {
        Rng rng = Rng::stream(seed, {static_cast<std::uint64_t>(StreamTag::audit)});
        add(audit_lemma1_tv(a.d, a.bound, a.samples, rng));
        add(audit_top_m_exponentials(a.d, a.m, a.samples, rng));
        const auto set = a.m == 1 ? parse_set_descriptor("mab:d=" + std::to_string(a.d))
                                  : parse_set_descriptor("mset:d=" + std::to_string(a.d) +
                                                         ";m=" + std::to_string(a.m));
        for (std::size_t k = 0; k < a.snapshots; ++k) {
            const RoundSnapshot snap = random_snapshot(*set, rng);
            add(audit_lemma5_quad(*set, snap, a.samples, rng));
            add(audit_lemma6_bias(*set, snap, a.samples, rng));
        }
    }

    emit(json{{"pass", all_pass}, {"audits", reports}}, c, "audit");
    if (!all_pass) return report_error("audit_failed", "one or more audits failed", kExitAuditFailed);
    return 0;
}

int cmd_lstar(const Common& c, const std::string& losses, const std::string& set_desc) {
    std::shared_ptr<const DecisionSet> set;
    std::optional<LossSource> source;
    if (!losses.empty()) {
        LossFile file = read_loss_csv(losses);
        std::string desc = set_desc;
        if (desc.empty()) {
            if (!file.set_descriptor) throw ConfigError("loss file has no set descriptor; pass --set");
            desc = *file.set_descriptor;
        }
        set = parse_set_descriptor(desc);
        if (set->dim() != file.d) throw ConfigError("set dimension does not match the loss file");
        if (file.rows.empty()) {
            emit(json{{"lstar", 0.0}, {"horizon", 0}, {"set", set->descriptor()}}, c, "lstar");
            return 0;
        }
        source = LossSource::from_rows(std::move(file.rows));
    } else if (!c.config.empty()) {
        ExperimentConfig cfg = load_config(c.config);
        if (c.seed) cfg.seed = *c.seed;
        set = make_decision_set(cfg.decision_set);
        source = make_loss_source(cfg.environment, set->dim(), cfg.horizon, environment_seed(cfg, 0));
    } else {
        throw ConfigError("lstar needs --losses FILE or --config PATH");
    }
    const auto L = cumulative_loss(*source);
    const auto [best, lstar] = best_fixed_action(*set, L);
    emit(json{{"lstar", lstar},
              {"best_action", best.to_string()},
              {"horizon", source->horizon()},
              {"set", set->descriptor()}},
         c, "lstar");
    return 0;
}

struct BoundArgs {
    std::optional<std::size_t> d;
    std::optional<std::size_t> m;
    double lstar = 0.0;
    std::optional<std::size_t> horizon;
    double C = kAdditiveTermConstant;
    std::string numerator = "as_printed";
};

int cmd_bound(const Common& c, BoundArgs b) {
    if (!c.config.empty()) {
        const ExperimentConfig cfg = load_config(c.config);
        const auto set = make_decision_set(cfg.decision_set);
        if (!b.d) b.d = set->dim();
        if (!b.m) b.m = set->max_weight();
        if (!b.horizon) b.horizon = cfg.horizon;
    }
    if (!b.d || !b.horizon) throw ConfigError("bound needs --d and --T (or --config)");
    const std::size_t d = *b.d;
    const std::size_t m = b.m.value_or(1);
    const auto num = parse_corollary1_numerator(b.numerator);
    const AdaptiveBound ab = theoretical_bound_adaptive(d, m, b.lstar, *b.horizon, b.C);
    const double eta = lstar_tuned_eta(d, m, b.lstar, num);
    emit(json{{"d", d},
              {"m", m},
              {"lstar", b.lstar},
              {"T", *b.horizon},
              {"D", exploration_constant(d, m)},
              {"adaptive", {{"first_order", ab.first_order}, {"worst_case", ab.worst_case}, {"value", ab.value}}},
              {"fixed", {{"numerator", to_string(num)}, {"eta", eta}, {"bound", fixed_tuning_bound(d, m, b.lstar, eta)}}}},
         c, "bound");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FPL with truncated perturbations and implicit exploration: experiments and audits"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "experiment config (JSON)");
        sub->add_option("--seed", common.seed, "base seed");
        sub->add_option("--out", common.out, "output directory");
        sub->add_option("--format", common.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->each([&](const std::string&) { common.format_given = true; });
        sub->add_option("--replications", common.replications, "number of replications");
    };

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    add_common(run);
    std::optional<std::size_t> jobs;
    run->add_option("--jobs", jobs, "worker threads");

    auto* audit = app.add_subcommand("audit", "run the lemma audit suite");
    add_common(audit);
    AuditArgs aa;
    audit->add_option("--d", aa.d, "dimension");
    audit->add_option("--m", aa.m, "action size");
    audit->add_option("--B", aa.bound, "truncation bound for the total-variation audit");
    audit->add_option("--samples", aa.samples, "Monte Carlo samples per audit");
    audit->add_option("--snapshots", aa.snapshots, "random round snapshots");
    audit->add_option("--lemma2", aa.lemma2_file, "check the loss-closeness bound on a final state (JSON)");

    auto* lstar = app.add_subcommand("lstar", "loss of the best fixed action in hindsight");
    add_common(lstar);
    std::string losses, set_desc;
    lstar->add_option("--losses", losses, "loss CSV file");
    lstar->add_option("--set", set_desc, "decision set descriptor, e.g. mset:d=10;m=3");

    auto* bound = app.add_subcommand("bound", "evaluate the regret bounds");
    add_common(bound);
    BoundArgs ba;
    bound->add_option("--d", ba.d, "dimension");
    bound->add_option("--m", ba.m, "action size");
    bound->add_option("--lstar", ba.lstar, "loss of the best action");
    bound->add_option("--T", ba.horizon, "horizon");
    bound->add_option("--C", ba.C, "additive-term constant");
    bound->add_option("--numerator", ba.numerator, "as_printed or three_D");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("usage", e.what(), kExitUsage);
    }

    try {
        if (*run) return cmd_run(common, jobs);
        if (*audit) return cmd_audit(common, aa);
        if (*lstar) return cmd_lstar(common, losses, set_desc);
        if (*bound) return cmd_bound(common, ba);
    } catch (const ConfigError& e) {
        return report_error(e.kind(), e.what(), kExitUsage);
    } catch (const Error& e) {
        return report_error(e.kind(), e.what(), kExitFailure);
    } catch (const std::exception& e) {
        return report_error("internal", e.what(), kExitFailure);
    }
    return kExitFailure;
}
