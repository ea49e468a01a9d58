#include "fpltrix/experiment.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "fpltrix/errors.hpp"
#include "fpltrix/rng.hpp"

namespace fpltrix {

namespace {

// easy_gap without an explicit "best" uses the lowest-index member of S.
nlohmann::json environment_for(const ExperimentConfig& config, const DecisionSet& set) {
    nlohmann::json env = config.environment;
    if (env.value("kind", std::string()) == "easy_gap" && !env.contains("best")) {
        std::vector<double> ramp(set.dim());
        for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i);
        env["best"] = set.linear_minimizer(ramp).support();
    }
    return env;
}

}  // namespace

std::uint64_t environment_seed(const ExperimentConfig& config, std::size_t replication) {
    if (config.environment.contains("seed")) {
        return config.environment.at("seed").get<std::uint64_t>();
    }
    return derive_seed(config.seed, {static_cast<std::uint64_t>(replication),
                                     static_cast<std::uint64_t>(StreamTag::environment)});
}

std::unique_ptr<Policy> make_policy(const PolicyConfig& config,
                                    std::shared_ptr<const DecisionSet> set,
                                    const LossSource& source) {
    if (config.kind == PolicyKind::uniform) return uniform_random_policy(std::move(set));

    const std::size_t d = set->dim();
    const std::size_t m = set->max_weight();
    auto schedule = [&] {
        if (config.tuning == ParamSchedule::Mode::adaptive) return ParamSchedule::adaptive(d, m);
        if (config.eta) {
            const double eta = *config.eta;
            const double gamma = config.gamma.value_or(eta * static_cast<double>(m));
            const double bound = config.bound.value_or(
                std::log(static_cast<double>(d) / static_cast<double>(m)) - std::log(eta));
            return ParamSchedule::fixed(d, m, eta, gamma, bound);
        }
        const double lstar = config.lstar ? *config.lstar : oracle_lstar(source, *set);
        return fixed_params_from_lstar(d, m, lstar, config.numerator);
    }();

    FplOptions options;
    options.q_method = config.q_method;
    options.mc_samples = config.mc_samples;
    options.estimator = config.estimator;
    options.law = config.kind == PolicyKind::fpl_trix ? PerturbationLaw::truncated
                                                      : PerturbationLaw::untruncated;
    return std::make_unique<FplTrix>(std::move(set), std::move(schedule), options);
}

ReplicationResult run_replication(const ExperimentConfig& config,
                                  std::shared_ptr<const DecisionSet> set, std::size_t replication) {
    ReplicationResult res;
    res.index = replication;
    try {
        res.environment_seed = environment_seed(config, replication);
        const LossSource source = make_loss_source(environment_for(config, *set), set->dim(),
                                                   config.horizon, res.environment_seed);
        auto policy = make_policy(config.policy, set, source);

        std::vector<double> L(set->dim(), 0.0);
        double learner = 0.0;
        res.trace.reserve(config.horizon);
        for (std::size_t t = 1; t <= config.horizon; ++t) {
            const auto rep = static_cast<std::uint64_t>(replication);
            Rng prng = Rng::stream(config.seed, {rep, t, static_cast<std::uint64_t>(StreamTag::perturbation)});
            Rng erng = Rng::stream(config.seed, {rep, t, static_cast<std::uint64_t>(StreamTag::estimation)});

            const Action action = policy->draw_action(prng);
            if (!set->contains(action)) {
                throw ProtocolError("policy played " + action.to_string() + ", not a member of " +
                                    set->descriptor());
            }
            const LossVector loss = source.next_loss(t);
            policy->step(action, Feedback::observe(loss, action), erng);

            RoundRecord rec;
            rec.t = t;
            rec.action = action;
            rec.loss = dot(action, loss.values());
            for (std::size_t i = 0; i < L.size(); ++i) L[i] += loss[i];
            learner += rec.loss;
            rec.regret_to_date = learner - best_fixed_action(*set, L).second;
            if (const auto info = policy->last_round()) {
                rec.params = info->params;
                rec.perturbation_bound = info->perturbation_bound;
                rec.s = info->s;
                rec.S = info->S;
                rec.q_method = info->q_method;
                rec.q_samples = info->q_samples;
            }
            res.trace.push_back(std::move(rec));
        }

        res.metrics = metrics_from_trace(res.trace, *set, source);
        if (const auto* fpl = dynamic_cast<const FplTrix*>(policy.get())) {
            const auto hat = fpl->estimator().hat_loss();
            res.final_hat_loss.assign(hat.begin(), hat.end());
            const auto info = fpl->last_round();
            if (info && fpl->options().law == PerturbationLaw::truncated) {
                RoundParams last = info->params;
                last.bound = info->perturbation_bound;
                res.lemma2 = audit_lemma2(Lemma2Input{res.final_hat_loss, last, fpl->schedule().D()}, *set);
            }
        }
    } catch (const Error& e) {
        res.error = ErrorReport{e.kind(), e.what()};
    } catch (const std::exception& e) {
        res.error = ErrorReport{"internal", e.what()};
    }
    return res;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    ExperimentResult result;
    result.config = config;
    const auto set = make_decision_set(config.decision_set);
    const std::size_t R = config.replications;
    result.replications.resize(R);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < R; k = next++) {
            result.replications[k] = run_replication(config, set, k);
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, R));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    Aggregate& agg = result.aggregate;
    std::vector<double> regrets;
    for (const auto& rep : result.replications) {
        if (rep.error) continue;
        ++agg.completed;
        regrets.push_back(rep.metrics.regret);
        agg.mean_regret += rep.metrics.regret;
        agg.mean_lstar += rep.metrics.lstar;
        agg.mean_learner_loss += rep.metrics.learner_loss;
        agg.mean_bound += rep.metrics.bound.value;
    }
    if (agg.completed > 0) {
        const double n = static_cast<double>(agg.completed);
        agg.mean_regret /= n;
        agg.mean_lstar /= n;
        agg.mean_learner_loss /= n;
        agg.mean_bound /= n;
        if (agg.completed > 1) {
            double ss = 0.0;
            for (double r : regrets) ss += (r - agg.mean_regret) * (r - agg.mean_regret);
            agg.stderr_regret = std::sqrt(ss / (n - 1.0) / n);
        }
    }
    return result;
}

Metrics metrics_from_trace(const std::vector<RoundRecord>& trace, const DecisionSet& set,
                           const LossSource& source) {
    if (trace.size() != source.horizon()) {
        throw InputError("trace has " + std::to_string(trace.size()) + " rounds, the source " +
                         std::to_string(source.horizon()));
    }
    Metrics m;
    m.cumulative_loss.assign(set.dim(), 0.0);
    for (const auto& rec : trace) {
        const LossVector loss = source.next_loss(rec.t);
        for (std::size_t i = 0; i < m.cumulative_loss.size(); ++i) m.cumulative_loss[i] += loss[i];
        m.learner_loss += rec.loss;
        m.regret_trajectory.push_back(rec.regret_to_date);
    }
    auto [best, lstar] = best_fixed_action(set, m.cumulative_loss);
    m.best_action = std::move(best);
    m.lstar = lstar;
    m.regret = m.learner_loss - m.lstar;
    m.bound = theoretical_bound_adaptive(set.dim(), set.max_weight(), m.lstar, source.horizon());
    return m;
}

}  // namespace fpltrix
