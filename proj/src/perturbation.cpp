#include "fpltrix/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fpltrix/errors.hpp"

namespace fpltrix {

namespace {

void check_bound(double bound) {
    if (!(bound > 0.0)) {
        throw ParameterError("truncation bound B must be positive, got " + std::to_string(bound));
    }
}

}  // namespace

TruncationParams::TruncationParams(double bound) : bound_(bound) {
    check_bound(bound);
    beta_ = std::exp(-bound);
    mass_ = -std::expm1(-bound);
}

double truncated_exp_density(double bound, double z) {
    check_bound(bound);
    if (z < 0.0 || z > bound) return 0.0;
    return std::exp(-z) / -std::expm1(-bound);
}

double truncated_exp_cdf(double bound, double z) {
    check_bound(bound);
    if (z <= 0.0) return 0.0;
    if (z >= bound) return 1.0;
    return std::expm1(-z) / std::expm1(-bound);
}

double sample_truncated_exp(double bound, double u) {
    const double mass = -std::expm1(-bound);  // 1 for B = +inf
    const double z = -std::log1p(-u * mass);
    return std::min(z, bound);
}

void fill_perturbation(std::span<double> out, const TruncationParams& trunc, Rng& rng) {
    const double mass = trunc.mass();
    const double bound = trunc.bound();
    for (double& z : out) {
        z = std::min(-std::log1p(-rng.uniform() * mass), bound);
    }
}

std::vector<double> sample_perturbation_vector(std::size_t d, double bound, Rng& rng) {
    if (d == 0) throw ConfigError("perturbation dimension must be positive");
    std::vector<double> z(d);
    fill_perturbation(z, TruncationParams(bound), rng);
    return z;
}

Action perturbed_leader(const DecisionSet& set, std::span<const double> hat_loss, double eta,
                        std::span<const double> z) {
    if (hat_loss.size() != set.dim() || z.size() != set.dim()) {
        throw ConfigError("perturbed leader: dimension mismatch");
    }
    std::vector<double> costs(set.dim());
    for (std::size_t i = 0; i < costs.size(); ++i) costs[i] = eta * hat_loss[i] - z[i];
    return set.linear_minimizer(costs);
}

LeaderSampler::LeaderSampler(const DecisionSet& set, std::span<const double> hat_loss, double eta,
                             TruncationParams trunc)
    : set_(set), trunc_(trunc), scaled_(set.dim()), z_(set.dim()), costs_(set.dim()) {
    if (hat_loss.size() != set.dim()) {
        throw ConfigError("perturbed leader: estimate has " + std::to_string(hat_loss.size()) +
                          " entries, decision set has d=" + std::to_string(set.dim()));
    }
    for (std::size_t i = 0; i < scaled_.size(); ++i) scaled_[i] = eta * hat_loss[i];
}

Action LeaderSampler::draw(Rng& rng) {
    fill_perturbation(z_, trunc_, rng);
    for (std::size_t i = 0; i < costs_.size(); ++i) costs_[i] = scaled_[i] - z_[i];
    return set_.linear_minimizer(costs_);
}

Action LeaderSampler::draw_with(std::span<const double> z) {
    if (z.size() != z_.size()) throw ConfigError("perturbation has the wrong dimension");
    std::copy(z.begin(), z.end(), z_.begin());
    for (std::size_t i = 0; i < costs_.size(); ++i) costs_[i] = scaled_[i] - z_[i];
    return set_.linear_minimizer(costs_);
}

}  // namespace fpltrix
