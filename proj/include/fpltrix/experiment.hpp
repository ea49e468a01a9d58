#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpltrix/action.hpp"
#include "fpltrix/audits.hpp"
#include "fpltrix/config.hpp"
#include "fpltrix/decision_set.hpp"
#include "fpltrix/environment.hpp"
#include "fpltrix/policy.hpp"
#include "fpltrix/schedule.hpp"

namespace fpltrix {

struct RoundRecord {
    std::size_t t = 0;
    Action action;
    double loss = 0.0;            // V_t^T l_t
    double regret_to_date = 0.0;  // sum_{s<=t} V_s^T l_s - min_v v^T L_t
    RoundParams params;           // zero for policies without a schedule
    double perturbation_bound = 0.0;
    double s = 0.0;
    double S = 0.0;
    std::string q_method = "none";
    std::size_t q_samples = 0;

    friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct Metrics {
    double learner_loss = 0.0;
    std::vector<double> cumulative_loss;  // L_T
    double lstar = 0.0;                   // L*_T
    Action best_action;
    double regret = 0.0;                  // R_T = learner_loss - L*_T
    std::vector<double> regret_trajectory;
    AdaptiveBound bound;
};

struct ErrorReport {
    std::string kind;
    std::string message;
};

struct ReplicationResult {
    std::size_t index = 0;
    std::uint64_t environment_seed = 0;
    Metrics metrics;
    std::vector<RoundRecord> trace;
    std::vector<double> final_hat_loss;  // empty for policies without estimates
    std::optional<AuditReport> lemma2;
    std::optional<ErrorReport> error;
};

struct Aggregate {
    std::size_t completed = 0;
    double mean_regret = 0.0;
    double stderr_regret = 0.0;
    double mean_lstar = 0.0;
    double mean_learner_loss = 0.0;
    double mean_bound = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ReplicationResult> replications;
    Aggregate aggregate;
};

// Seed of the loss sequence for a replication: the environment's pinned seed
// if it has one, else derived from the experiment seed.
std::uint64_t environment_seed(const ExperimentConfig& config, std::size_t replication);

std::unique_ptr<Policy> make_policy(const PolicyConfig& config,
                                    std::shared_ptr<const DecisionSet> set,
                                    const LossSource& source);

// One replication. Errors from any module are captured in the result's
// `error` field instead of propagating.
ReplicationResult run_replication(const ExperimentConfig& config,
                                  std::shared_ptr<const DecisionSet> set, std::size_t replication);

// All replications (on config.jobs worker threads); aggregation is ordered by
// replication index, so results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

Metrics metrics_from_trace(const std::vector<RoundRecord>& trace, const DecisionSet& set,
                           const LossSource& source);

}  // namespace fpltrix
