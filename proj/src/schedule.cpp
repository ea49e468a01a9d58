#include "fpltrix/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "fpltrix/errors.hpp"

namespace fpltrix {

double exploration_constant(std::size_t d, std::size_t m) {
    if (m == 0 || m > d) throw ConfigError("need 1 <= m <= d");
    return std::log(static_cast<double>(d) / static_cast<double>(m)) + 1.0;
}

double adaptive_eta(const EstimatorState& est, double D) {
    if (est.t() == 0) return D;
    return std::sqrt(D / est.S());
}

ParamSchedule::ParamSchedule(Mode mode, std::size_t d, std::size_t m, RoundParams constant)
    : mode_(mode), d_(d), m_(m), D_(exploration_constant(d, m)), constant_(constant) {}

ParamSchedule ParamSchedule::adaptive(std::size_t d, std::size_t m) {
    const double D = exploration_constant(d, m);
    const double beta1 = static_cast<double>(m) / static_cast<double>(d) * D;
    if (beta1 >= 1.0) {
        throw ParameterError("adaptive tuning needs (m/d)(log(d/m)+1) < 1; got " +
                             std::to_string(beta1) + " for d=" + std::to_string(d) +
                             ", m=" + std::to_string(m));
    }
    return ParamSchedule(Mode::adaptive, d, m, RoundParams{});
}

ParamSchedule ParamSchedule::fixed(std::size_t d, std::size_t m, double eta, double gamma,
                                   double bound) {
    exploration_constant(d, m);
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ParameterError("eta must be positive");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ParameterError("gamma must be positive");
    if (!(bound > 0.0) || !std::isfinite(bound)) {
        throw ParameterError("truncation bound must be positive and finite");
    }
    const double beta = std::exp(-bound);
    if (beta * static_cast<double>(d) > gamma * (1.0 + 1e-12)) {
        throw ParameterError("need beta d <= gamma; got beta d = " +
                             std::to_string(beta * static_cast<double>(d)) +
                             ", gamma = " + std::to_string(gamma));
    }
    return ParamSchedule(Mode::fixed, d, m, RoundParams{eta, gamma, beta, bound});
}

RoundParams ParamSchedule::at(const EstimatorState& est) const {
    if (mode_ == Mode::fixed) return constant_;
    RoundParams p;
    p.eta = adaptive_eta(est, D_);
    p.gamma = static_cast<double>(m_) * p.eta;
    p.beta = static_cast<double>(m_) / static_cast<double>(d_) * p.eta;
    p.bound = -std::log(p.beta);
    return p;
}

std::string to_string(ParamSchedule::Mode mode) {
    return mode == ParamSchedule::Mode::fixed ? "fixed" : "adaptive";
}

Corollary1Numerator parse_corollary1_numerator(const std::string& name) {
    if (name == "as_printed") return Corollary1Numerator::as_printed;
    if (name == "three_D") return Corollary1Numerator::three_D;
    throw ConfigError("unknown numerator '" + name + "' (expected as_printed or three_D)");
}

std::string to_string(Corollary1Numerator numerator) {
    return numerator == Corollary1Numerator::as_printed ? "as_printed" : "three_D";
}

double lstar_tuned_eta(std::size_t d, std::size_t m, double lstar,
                       Corollary1Numerator numerator) {
    exploration_constant(d, m);
    if (!(lstar >= 0.0) || !std::isfinite(lstar)) {
        throw ParameterError("L* must be finite and nonnegative");
    }
    if (lstar == 0.0) return 1.0;
    const double log_ratio = std::log(static_cast<double>(d) / static_cast<double>(m));
    const double num =
        3.0 * log_ratio + (numerator == Corollary1Numerator::as_printed ? 1.0 : 3.0);
    return std::min(1.0, std::sqrt(num / (static_cast<double>(d) * lstar)));
}

ParamSchedule fixed_params_from_lstar(std::size_t d, std::size_t m, double lstar,
                                      Corollary1Numerator numerator) {
    const double eta = lstar_tuned_eta(d, m, lstar, numerator);
    const double log_ratio = std::log(static_cast<double>(d) / static_cast<double>(m));
    const double bound = log_ratio - std::log(eta);
    if (!(bound > 0.0)) {
        throw ParameterError("L*-tuned truncation bound is not positive (m = d with eta = 1)");
    }
    return ParamSchedule::fixed(d, m, eta, eta * static_cast<double>(m), bound);
}

double fixed_tuning_bound(std::size_t d, std::size_t m, double lstar, double eta) {
    const double D = exploration_constant(d, m);
    if (!(eta > 0.0)) throw ParameterError("eta must be positive");
    if (!(lstar >= 0.0)) throw ParameterError("L* must be nonnegative");
    const double dd = static_cast<double>(d);
    const double mm = static_cast<double>(m);
    const double B = std::log(dd / mm) - std::log(eta);
    return mm * D / eta + 3.0 * eta * mm * dd * lstar + 3.0 * mm * mm * dd * (D + B) + 3.0 * dd;
}

AdaptiveBound theoretical_bound_adaptive(std::size_t d, std::size_t m, double lstar,
                                         std::size_t horizon, double additive_constant) {
    const double D = exploration_constant(d, m);
    if (!(lstar >= 0.0) || !std::isfinite(lstar)) {
        throw ParameterError("L* must be finite and nonnegative");
    }
    const double dd = static_cast<double>(d);
    const double mm = static_cast<double>(m);
    const double T = static_cast<double>(horizon);
    AdaptiveBound b;
    const double log_dT = horizon == 0 ? 0.0 : std::max(std::log(dd * T), 0.0);
    b.first_order = 13.0 * mm * std::sqrt(dd * lstar * D) + additive_constant * mm * mm * dd * log_dT;
    b.worst_case = 13.0 * mm * std::sqrt(dd * T * D) + 9.49 * mm;
    b.value = std::min(b.first_order, b.worst_case);
    return b;
}

}  // namespace fpltrix
