#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fpltrix/action.hpp"
#include "fpltrix/decision_set.hpp"
#include "fpltrix/rng.hpp"

namespace fpltrix {

inline constexpr double kUntruncated = std::numeric_limits<double>::infinity();

// Truncation bound B > 0 (possibly +inf) and beta = exp(-B).
class TruncationParams {
public:
    explicit TruncationParams(double bound);

    static TruncationParams untruncated() { return TruncationParams(kUntruncated); }

    double bound() const { return bound_; }
    double beta() const { return beta_; }
    bool truncated() const { return bound_ != kUntruncated; }
    // 1 - exp(-B), the exponential mass kept by the truncation.
    double mass() const { return mass_; }

private:
    double bound_;
    double beta_;
    double mass_;
};

// e^{-z} / (1 - e^{-B}) on [0, B], zero elsewhere.
double truncated_exp_density(double bound, double z);
// (1 - e^{-z}) / (1 - e^{-B}) clamped to [0, 1].
double truncated_exp_cdf(double bound, double z);
// Inverse CDF: -log(1 - u (1 - e^{-B})), clamped to B. B = +inf gives -log(1 - u).
double sample_truncated_exp(double bound, double u);

std::vector<double> sample_perturbation_vector(std::size_t d, double bound, Rng& rng);
void fill_perturbation(std::span<double> out, const TruncationParams& trunc, Rng& rng);

// argmin_{v in S} v^T (eta * hatL - z)
Action perturbed_leader(const DecisionSet& set, std::span<const double> hat_loss, double eta,
                        std::span<const double> z);

// Repeated draws of the perturbed leader for a fixed (hatL, eta, B); reuses
// its buffers across draws.
class LeaderSampler {
public:
    LeaderSampler(const DecisionSet& set, std::span<const double> hat_loss, double eta,
                  TruncationParams trunc);

    Action draw(Rng& rng);
    // Draw with a caller-supplied perturbation (exposed for coupling checks).
    Action draw_with(std::span<const double> z);
    std::span<const double> last_perturbation() const { return z_; }

private:
    const DecisionSet& set_;
    TruncationParams trunc_;
    std::vector<double> scaled_;
    std::vector<double> z_;
    std::vector<double> costs_;
};

}  // namespace fpltrix
