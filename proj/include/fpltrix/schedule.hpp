#pragma once

#include <cstddef>
#include <string>

#include "fpltrix/estimator.hpp"

namespace fpltrix {

// Parameters of one round: learning rate, IX parameter, beta = e^{-B}, and B.
struct RoundParams {
    double eta = 0.0;
    double gamma = 0.0;
    double beta = 0.0;
    double bound = 0.0;

    friend bool operator==(const RoundParams&, const RoundParams&) = default;
};

// D = log(d/m) + 1
double exploration_constant(std::size_t d, std::size_t m);

// eta_t = sqrt(D / S_{t-1}); exactly D before the first round.
double adaptive_eta(const EstimatorState& est, double D);

class ParamSchedule {
public:
    enum class Mode { fixed, adaptive };

    // gamma_t = m eta_t and beta_t = (m/d) eta_t with eta_t from adaptive_eta.
    // Throws ParameterError when beta_1 = (m/d) D >= 1 (e.g. m = d).
    static ParamSchedule adaptive(std::size_t d, std::size_t m);

    // Constant parameters. Requires eta, gamma > 0, B > 0 finite and
    // beta d <= gamma.
    static ParamSchedule fixed(std::size_t d, std::size_t m, double eta, double gamma,
                               double bound);

    Mode mode() const { return mode_; }
    std::size_t d() const { return d_; }
    std::size_t m() const { return m_; }
    double D() const { return D_; }

    RoundParams at(const EstimatorState& est) const;

private:
    ParamSchedule(Mode mode, std::size_t d, std::size_t m, RoundParams constant);

    Mode mode_;
    std::size_t d_;
    std::size_t m_;
    double D_;
    RoundParams constant_;
};

std::string to_string(ParamSchedule::Mode mode);

// Which numerator to use in the L*-tuned learning rate: the printed
// 3 log(d/m) + 1, or 3D = 3 log(d/m) + 3 as used when bounding L*.
enum class Corollary1Numerator { as_printed, three_D };

Corollary1Numerator parse_corollary1_numerator(const std::string& name);
std::string to_string(Corollary1Numerator numerator);

// eta = min{1, sqrt(numerator / (d L*))}; L* = 0 gives 1.
double lstar_tuned_eta(std::size_t d, std::size_t m, double lstar,
                       Corollary1Numerator numerator = Corollary1Numerator::as_printed);

// Fixed schedule with gamma = eta m, beta = eta m / d, B = log(d/m) - log(eta).
ParamSchedule fixed_params_from_lstar(std::size_t d, std::size_t m, double lstar,
                                      Corollary1Numerator numerator =
                                          Corollary1Numerator::as_printed);

// Expected-regret bound of the fixed-parameter algorithm at learning rate eta:
// mD/eta + 3 eta m d L* + 3 m^2 d (D + B) + 3d with B = log(d/m) - log(eta).
double fixed_tuning_bound(std::size_t d, std::size_t m, double lstar, double eta);

inline constexpr double kAdditiveTermConstant = 9.0;

struct AdaptiveBound {
    double first_order = 0.0;  // 13 m sqrt(d L* D) + C m^2 d log(dT)
    double worst_case = 0.0;   // 13 m sqrt(d T D) + 9.49 m
    double value = 0.0;        // min of the two
};

// Regret bounds of the adaptively tuned algorithm. log(dT) is floored at 0.
AdaptiveBound theoretical_bound_adaptive(std::size_t d, std::size_t m, double lstar,
                                         std::size_t horizon,
                                         double additive_constant = kAdditiveTermConstant);

}  // namespace fpltrix
