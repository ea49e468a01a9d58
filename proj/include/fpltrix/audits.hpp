#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpltrix/action.hpp"
#include "fpltrix/decision_set.hpp"
#include "fpltrix/estimator.hpp"
#include "fpltrix/rng.hpp"
#include "fpltrix/schedule.hpp"

namespace fpltrix {

// Statistical audits pass within 3 standard errors; deterministic ones
// within this absolute tolerance.
inline constexpr double kAuditSigmas = 3.0;
inline constexpr double kAuditTolerance = 1e-9;

struct AuditReport {
    std::string name;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double std_error = 0.0;  // 0 for exact checks
    double margin = 0.0;  // allowed slack minus observed violation; >= 0 on PASS
    std::size_t samples = 0;
    std::string detail;

    nlohmann::json to_json() const;
};

// Total variation between truncated and untruncated perturbations, measured
// on the action indicators of an enumerable set: every
// |P(V = v) - P(V~ = v)| should be at most beta d. Both forecasters play
// argmin v^T (scaled_costs - Z) and share their uniforms, so the gaps are
// paired differences. lhs = largest gap, rhs = beta d.
AuditReport audit_lemma1_tv(const DecisionSet& set, std::span<const double> scaled_costs,
                            double bound, std::size_t samples, Rng& rng);
// MAB with d arms and zero costs.
AuditReport audit_lemma1_tv(std::size_t d, double bound, std::size_t samples, Rng& rng);

// State at the end of a run needed for the loss-closeness check.
struct Lemma2Input {
    std::vector<double> hat_loss;  // hatL_T
    RoundParams last;              // eta_T, gamma_T, B_T
    double D = 1.0;
};

// max_i hatL_{T,i} - min_v v^T hatL_T <= m (D + B_T) / eta_T + 1 / gamma_T
AuditReport audit_lemma2(const Lemma2Input& input, const DecisionSet& set);

// One round of the algorithm frozen for the per-round lemmas.
struct RoundSnapshot {
    std::vector<double> hat_loss_prev;  // hatL_{t-1}
    RoundParams params;
    Action played;                      // V_t
    std::vector<double> losses;         // l_t
    QEstimate q;
    std::vector<double> hat_ell;        // IX estimate of round t
};

// Random hatL_{t-1}, eta and losses; V_t drawn from the truncated forecaster,
// q exact on MAB (quadrature) and Monte Carlo with `q_samples` otherwise,
// gamma = m eta and beta = (m/d) eta as in the adaptive schedule.
RoundSnapshot random_snapshot(const DecisionSet& set, Rng& rng, std::size_t q_samples = 200'000);

// sum_u p~(u) (u^T hat l)^2 <= m sum_j hat l_j, with p~ the law of the
// untruncated forecaster argmin v^T (eta hatL_{t-1} - Z~). Exact via q~ on
// MAB; Monte Carlo with `samples` draws otherwise.
AuditReport audit_lemma5_quad(const DecisionSet& set, const RoundSnapshot& snap,
                              std::size_t samples, Rng& rng);

// sum_u p~(u) u^T hat l >= V_t^T l_t - (gamma + beta d) sum_i hat l_i
AuditReport audit_lemma6_bias(const DecisionSet& set, const RoundSnapshot& snap,
                              std::size_t samples, Rng& rng);

// E[sum of the m largest of d unit exponentials] <= m (log(d/m) + 1)
AuditReport audit_top_m_exponentials(std::size_t d, std::size_t m, std::size_t samples, Rng& rng);

}  // namespace fpltrix
