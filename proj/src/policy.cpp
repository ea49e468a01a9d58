#include "fpltrix/policy.hpp"

#include <utility>

#include "fpltrix/errors.hpp"
#include "fpltrix/perturbation.hpp"

namespace fpltrix {

std::string to_string(EstimatorKind kind) {
    return kind == EstimatorKind::ix ? "ix" : "geometric_resampling";
}

EstimatorKind parse_estimator_kind(const std::string& name) {
    if (name == "ix") return EstimatorKind::ix;
    if (name == "geometric_resampling" || name == "gr") return EstimatorKind::geometric_resampling;
    throw ConfigError("unknown estimator '" + name + "'");
}

FplTrix::FplTrix(std::shared_ptr<const DecisionSet> set, ParamSchedule schedule,
                 FplOptions options)
    : set_(std::move(set)),
      schedule_(std::move(schedule)),
      options_(options),
      est_(schedule_.d(), schedule_.D()) {
    if (!set_) throw ConfigError("policy needs a decision set");
    if (set_->dim() != schedule_.d() || set_->max_weight() != schedule_.m()) {
        throw ConfigError("schedule (d=" + std::to_string(schedule_.d()) +
                          ", m=" + std::to_string(schedule_.m()) +
                          ") does not match decision set " + set_->descriptor());
    }
    if (options_.estimator == EstimatorKind::ix && options_.q_method == QMethod::quadrature_mab &&
        set_->kind() != SetKind::mab) {
        throw UnsupportedError("quadrature q requires a multi-armed bandit decision set, got " +
                               set_->descriptor());
    }
}

std::string FplTrix::name() const {
    return options_.law == PerturbationLaw::truncated ? "fpl_trix" : "fpl_ix_untruncated";
}

double FplTrix::perturbation_bound(const RoundParams& params) const {
    return options_.law == PerturbationLaw::truncated ? params.bound : kUntruncated;
}

Action FplTrix::draw_action(Rng& rng) {
    const RoundParams params = current_params();
    const auto z = sample_perturbation_vector(set_->dim(), perturbation_bound(params), rng);
    pending_ = perturbed_leader(*set_, est_.hat_loss(), params.eta, z);
    return *pending_;
}

void FplTrix::step(const Action& played, const Feedback& feedback, Rng& rng) {
    if (!pending_) throw ProtocolError("step called without a preceding draw_action");
    if (played != *pending_) {
        throw ProtocolError("feedback is for " + played.to_string() + " but the policy drew " +
                            pending_->to_string());
    }
    feedback.check_matches(played);

    const RoundParams params = current_params();
    const double bound = perturbation_bound(params);
    RoundInfo info;
    info.params = params;
    info.perturbation_bound = bound;

    std::vector<double> hat;
    if (options_.estimator == EstimatorKind::ix) {
        QEstimate q;
        if (options_.q_method == QMethod::quadrature_mab) {
            const auto support = played.support();
            q = q_exact_mab_quadrature(est_.hat_loss(), params.eta, bound, support);
        } else {
            const std::size_t K =
                options_.mc_samples > 0 ? options_.mc_samples : default_mc_samples(params.gamma);
            q = estimate_q_monte_carlo(*set_, est_.hat_loss(), params.eta, bound, K, rng);
        }
        hat = ix_loss_estimate(feedback, played, q, params.gamma);
        info.q_method = to_string(q.method);
        info.q_samples = q.n_samples;
        last_q_ = std::move(q);
    } else {
        hat = geometric_resampling_estimate(*set_, est_.hat_loss(), params.eta, bound, played,
                                            feedback, params.gamma, rng);
        info.q_method = "geometric_resampling";
        info.q_samples = geometric_resampling_cap(params.gamma);
        last_q_.reset();
    }

    est_.accumulate(hat);
    info.t = est_.t();
    info.s = est_.s_last();
    info.S = est_.S();
    last_hat_ = std::move(hat);
    last_ = info;
    pending_.reset();
}

std::unique_ptr<FplTrix> untruncated_fpl_ix_policy(std::shared_ptr<const DecisionSet> set,
                                                   ParamSchedule schedule, FplOptions options) {
    options.law = PerturbationLaw::untruncated;
    return std::make_unique<FplTrix>(std::move(set), std::move(schedule), options);
}

UniformRandomPolicy::UniformRandomPolicy(std::shared_ptr<const DecisionSet> set)
    : set_(std::move(set)) {
    if (!set_) throw ConfigError("policy needs a decision set");
}

Action UniformRandomPolicy::draw_action(Rng& rng) { return set_->sample_uniform(rng); }

void UniformRandomPolicy::step(const Action& played, const Feedback& feedback, Rng&) {
    feedback.check_matches(played);
    RoundInfo info;
    info.t = ++t_;
    info.q_method = "none";
    last_ = info;
}

std::unique_ptr<UniformRandomPolicy> uniform_random_policy(std::shared_ptr<const DecisionSet> set) {
    return std::make_unique<UniformRandomPolicy>(std::move(set));
}

}  // namespace fpltrix
