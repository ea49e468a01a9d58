#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fpltrix/action.hpp"
#include "fpltrix/decision_set.hpp"
#include "fpltrix/estimator.hpp"
#include "fpltrix/rng.hpp"
#include "fpltrix/schedule.hpp"

namespace fpltrix {

enum class EstimatorKind { ix, geometric_resampling };
enum class PerturbationLaw { truncated, untruncated };

std::string to_string(EstimatorKind kind);
EstimatorKind parse_estimator_kind(const std::string& name);

// What a policy did in its most recent completed round.
struct RoundInfo {
    std::size_t t = 0;
    RoundParams params;
    double perturbation_bound = 0.0;  // B actually used for Z_t (+inf if untruncated)
    double s = 0.0;
    double S = 0.0;
    std::string q_method;  // "monte_carlo", "quadrature_mab", "geometric_resampling", "none"
    std::size_t q_samples = 0;
};

class Policy {
public:
    virtual ~Policy() = default;

    virtual std::string name() const = 0;
    virtual Action draw_action(Rng& rng) = 0;
    // Consumes the semi-bandit feedback of the action returned by the
    // preceding draw_action call.
    virtual void step(const Action& played, const Feedback& feedback, Rng& rng) = 0;
    virtual std::optional<RoundInfo> last_round() const { return std::nullopt; }
};

struct FplOptions {
    QMethod q_method = QMethod::monte_carlo;
    std::size_t mc_samples = 0;  // 0: default_mc_samples(gamma_t)
    EstimatorKind estimator = EstimatorKind::ix;
    PerturbationLaw law = PerturbationLaw::truncated;
};

// Follow the perturbed leader with truncated exponential perturbations and
// implicit-exploration loss estimates. Each round:
//   1. (eta_t, gamma_t, beta_t, B_t) from the schedule and S_{t-1}
//   2. V_t = argmin_v v^T (eta_t hatL_{t-1} - Z_t), Z_{t,i} ~ f_{B_t}
//   3. hat l_t from the observed losses (IX or geometric resampling)
//   4. hatL_t = hatL_{t-1} + hat l_t
class FplTrix final : public Policy {
public:
    FplTrix(std::shared_ptr<const DecisionSet> set, ParamSchedule schedule, FplOptions options = {});

    std::string name() const override;
    Action draw_action(Rng& rng) override;
    void step(const Action& played, const Feedback& feedback, Rng& rng) override;
    std::optional<RoundInfo> last_round() const override { return last_; }

    const DecisionSet& decision_set() const { return *set_; }
    const ParamSchedule& schedule() const { return schedule_; }
    const FplOptions& options() const { return options_; }
    const EstimatorState& estimator() const { return est_; }
    std::size_t round() const { return est_.t(); }

    // Parameters of the upcoming round.
    RoundParams current_params() const { return schedule_.at(est_); }
    double perturbation_bound(const RoundParams& params) const;

    std::span<const double> last_estimate() const { return last_hat_; }
    const std::optional<QEstimate>& last_q() const { return last_q_; }

private:
    std::shared_ptr<const DecisionSet> set_;
    ParamSchedule schedule_;
    FplOptions options_;
    EstimatorState est_;
    std::optional<Action> pending_;
    std::optional<RoundInfo> last_;
    std::optional<QEstimate> last_q_;
    std::vector<double> last_hat_;
};

// FPL with untruncated exponential perturbations; the schedule still drives
// eta_t and gamma_t and the IX estimates are unchanged.
std::unique_ptr<FplTrix> untruncated_fpl_ix_policy(std::shared_ptr<const DecisionSet> set,
                                                   ParamSchedule schedule,
                                                   FplOptions options = {});

// Uniformly random member of S every round; ignores feedback.
class UniformRandomPolicy final : public Policy {
public:
    explicit UniformRandomPolicy(std::shared_ptr<const DecisionSet> set);

    std::string name() const override { return "uniform"; }
    Action draw_action(Rng& rng) override;
    void step(const Action& played, const Feedback& feedback, Rng& rng) override;
    std::optional<RoundInfo> last_round() const override { return last_; }

private:
    std::shared_ptr<const DecisionSet> set_;
    std::size_t t_ = 0;
    std::optional<RoundInfo> last_;
};

std::unique_ptr<UniformRandomPolicy> uniform_random_policy(std::shared_ptr<const DecisionSet> set);

}  // namespace fpltrix
