#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fpltrix/action.hpp"
#include "fpltrix/decision_set.hpp"
#include "fpltrix/perturbation.hpp"
#include "fpltrix/rng.hpp"

namespace fpltrix {

enum class QMethod { monte_carlo, quadrature_mab };

std::string to_string(QMethod method);
QMethod parse_q_method(const std::string& name);

// Estimate of q_i = E[V_i | past], the probability that the perturbed leader
// includes component i.
struct QEstimate {
    std::vector<double> q;
    QMethod method = QMethod::monte_carlo;
    std::size_t n_samples = 0;  // 0 for quadrature
};

// Redraw count for the plug-in estimate: max(1000, ceil(10 / gamma)), capped at 1e5.
std::size_t default_mc_samples(double gamma);

// Average of K independent redraws of the perturbed leader.
QEstimate estimate_q_monte_carlo(const DecisionSet& set, std::span<const double> hat_loss,
                                 double eta, double bound, std::size_t samples, Rng& rng);

// Exact q for the multi-armed bandit. Arm i wins when Z_j < Z_i + c_j for all
// j != i, with c_j = eta (L_j - L_i), so
//   q_i = int_0^B f_B(z) prod_{j != i} F_B(z + c_j) dz.
// After x = e^{-z} each factor is clamp((1 - x e^{-c_j}) / (1 - beta), 0, 1),
// a piecewise-linear function of x; the integrand is integrated piece by piece
// with adaptive Gauss-Kronrod. `only`, when non-empty, restricts the work to
// the listed arms (the others are left at zero). B = +inf is accepted.
QEstimate q_exact_mab_quadrature(std::span<const double> hat_loss, double eta, double bound,
                                 std::span<const std::size_t> only = {});
// As above; throws UnsupportedError unless `set` is a multi-armed bandit.
QEstimate q_exact_mab_quadrature(const DecisionSet& set, std::span<const double> hat_loss,
                                 double eta, double bound);

// IX estimate l_i V_i / (q_i + gamma); zero off the action's support.
std::vector<double> ix_loss_estimate(const Feedback& feedback, const Action& played,
                                     const QEstimate& q, double gamma);

// Capped geometric resampling: for each observed component, the number of
// independent redraws of the perturbed leader until one contains it, capped
// at M = ceil(1/gamma), multiplies the observed loss. Redraws are shared
// between components.
std::vector<double> geometric_resampling_estimate(const DecisionSet& set,
                                                  std::span<const double> hat_loss, double eta,
                                                  double bound, const Action& played,
                                                  const Feedback& feedback, double gamma,
                                                  Rng& rng);

std::size_t geometric_resampling_cap(double gamma);

// Cumulative estimates hatL, the last per-round sum s_t and the running total
// S_t = 1/D + sum_k s_k.
class EstimatorState {
public:
    EstimatorState(std::size_t d, double D);

    std::span<const double> hat_loss() const { return hat_loss_; }
    double s_last() const { return s_last_; }
    double S() const { return S_; }
    double D() const { return D_; }
    std::size_t t() const { return t_; }

    // hatL += hat_ell, s = sum(hat_ell), S += s, t += 1.
    void accumulate(std::span<const double> hat_ell);

private:
    std::vector<double> hat_loss_;
    double s_last_ = 0.0;
    double S_;
    double D_;
    std::size_t t_ = 0;
};

EstimatorState accumulate(EstimatorState state, std::span<const double> hat_ell);

}  // namespace fpltrix
