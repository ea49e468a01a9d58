#include "fpltrix/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fpltrix/errors.hpp"

namespace fpltrix {

namespace {

void check_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw ParameterError(std::string(name) + " must be positive, got " + std::to_string(value));
    }
}

// Integral of prod_j clamp((1 - x a_j) / mass, 0, 1) over x in [beta, 1].
double mab_win_integral(std::span<const double> a, double beta, double mass) {
    auto integrand = [&](double x) {
        double prod = 1.0;
        for (double aj : a) {
            const double f = (1.0 - x * aj) / mass;
            if (f <= 0.0) return 0.0;
            if (f < 1.0) prod *= f;
        }
        return prod;
    };

    std::vector<double> knots{beta, 1.0};
    for (double aj : a) {
        for (double k : {1.0 / aj, beta / aj}) {
            if (k > beta && k < 1.0) knots.push_back(k);
        }
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

    // On each piece the integrand is a polynomial of degree < d, which the
    // 15-point Kronrod rule integrates exactly up to degree 22; only larger
    // problems need subdivision.
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
    const unsigned depth = a.size() < 22 ? 0 : 15;
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double lo = knots[k];
        const double hi = knots[k + 1];
        if (!(hi > lo) || integrand(0.5 * (lo + hi)) == 0.0) continue;
        total += Kronrod::integrate(integrand, lo, hi, depth);
    }
    return total;
}

}  // namespace

std::string to_string(QMethod method) {
    switch (method) {
        case QMethod::monte_carlo: return "monte_carlo";
        case QMethod::quadrature_mab: return "quadrature_mab";
    }
    return "unknown";
}

QMethod parse_q_method(const std::string& name) {
    if (name == "monte_carlo") return QMethod::monte_carlo;
    if (name == "quadrature_mab" || name == "quadrature") return QMethod::quadrature_mab;
    throw ConfigError("unknown q method '" + name + "'");
}

std::size_t default_mc_samples(double gamma) {
    check_positive(gamma, "gamma");
    const double wanted = std::ceil(10.0 / gamma);
    return static_cast<std::size_t>(std::clamp(wanted, 1000.0, 100000.0));
}

QEstimate estimate_q_monte_carlo(const DecisionSet& set, std::span<const double> hat_loss,
                                 double eta, double bound, std::size_t samples, Rng& rng) {
    check_positive(eta, "eta");
    if (samples == 0) throw ConfigError("Monte Carlo q needs at least one sample");
    LeaderSampler sampler(set, hat_loss, eta, TruncationParams(bound));
    std::vector<std::size_t> counts(set.dim(), 0);
    for (std::size_t k = 0; k < samples; ++k) {
        const Action a = sampler.draw(rng);
        const auto bits = a.bits();
        for (std::size_t i = 0; i < bits.size(); ++i) counts[i] += bits[i];
    }
    QEstimate est;
    est.method = QMethod::monte_carlo;
    est.n_samples = samples;
    est.q.resize(set.dim());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        est.q[i] = static_cast<double>(counts[i]) / static_cast<double>(samples);
    }
    return est;
}

QEstimate q_exact_mab_quadrature(std::span<const double> hat_loss, double eta, double bound,
                                 std::span<const std::size_t> only) {
    check_positive(eta, "eta");
    const TruncationParams trunc(bound);
    const std::size_t d = hat_loss.size();
    if (d == 0) throw ConfigError("empty estimate vector");

    QEstimate est;
    est.method = QMethod::quadrature_mab;
    est.n_samples = 0;
    est.q.assign(d, 0.0);

    std::vector<std::size_t> arms;
    if (only.empty()) {
        for (std::size_t i = 0; i < d; ++i) arms.push_back(i);
    } else {
        arms.assign(only.begin(), only.end());
    }

    std::vector<double> a;
    a.reserve(d);
    for (std::size_t i : arms) {
        if (i >= d) throw ConfigError("arm index out of range");
        if (d == 1) {
            est.q[i] = 1.0;
            continue;
        }
        a.clear();
        bool dominated = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (j == i) continue;
            const double c = eta * (hat_loss[j] - hat_loss[i]);
            if (c <= -trunc.bound()) {
                dominated = true;  // arm j beats arm i for every perturbation
                break;
            }
            a.push_back(std::exp(-std::max(c, -700.0)));
        }
        if (dominated) continue;
        const double value = mab_win_integral(a, trunc.beta(), trunc.mass()) / trunc.mass();
        est.q[i] = std::clamp(value, 0.0, 1.0);
    }
    return est;
}

QEstimate q_exact_mab_quadrature(const DecisionSet& set, std::span<const double> hat_loss,
                                 double eta, double bound) {
    if (set.kind() != SetKind::mab) {
        throw UnsupportedError("quadrature q is only available for multi-armed bandits, not " +
                               set.descriptor());
    }
    if (hat_loss.size() != set.dim()) throw ConfigError("estimate vector has the wrong dimension");
    return q_exact_mab_quadrature(hat_loss, eta, bound);
}

std::vector<double> ix_loss_estimate(const Feedback& feedback, const Action& played,
                                     const QEstimate& q, double gamma) {
    check_positive(gamma, "gamma");
    feedback.check_matches(played);
    if (q.q.size() != played.size()) {
        throw EstimatorStateError("q has " + std::to_string(q.q.size()) + " entries, expected " +
                                  std::to_string(played.size()));
    }
    std::vector<double> hat(played.size(), 0.0);
    for (std::size_t i = 0; i < played.size(); ++i) {
        if (!(q.q[i] >= 0.0)) {
            throw EstimatorStateError("negative or NaN q at component " + std::to_string(i));
        }
        if (played[i]) hat[i] = *feedback[i] / (q.q[i] + gamma);
    }
    return hat;
}

std::size_t geometric_resampling_cap(double gamma) {
    check_positive(gamma, "gamma");
    return static_cast<std::size_t>(std::ceil(1.0 / gamma));
}

std::vector<double> geometric_resampling_estimate(const DecisionSet& set,
                                                  std::span<const double> hat_loss, double eta,
                                                  double bound, const Action& played,
                                                  const Feedback& feedback, double gamma,
                                                  Rng& rng) {
    feedback.check_matches(played);
    const std::size_t cap = geometric_resampling_cap(gamma);
    std::vector<double> hat(played.size(), 0.0);
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < played.size(); ++i) {
        if (played[i] && *feedback[i] > 0.0) pending.push_back(i);
    }
    if (pending.empty()) return hat;

    std::vector<std::size_t> waiting(played.size(), cap);
    LeaderSampler sampler(set, hat_loss, eta, TruncationParams(bound));
    for (std::size_t k = 1; k <= cap && !pending.empty(); ++k) {
        const Action redraw = sampler.draw(rng);
        std::erase_if(pending, [&](std::size_t i) {
            if (!redraw[i]) return false;
            waiting[i] = k;
            return true;
        });
    }
    for (std::size_t i = 0; i < played.size(); ++i) {
        if (played[i]) hat[i] = *feedback[i] * static_cast<double>(waiting[i]);
    }
    return hat;
}

EstimatorState::EstimatorState(std::size_t d, double D) : hat_loss_(d, 0.0), S_(1.0 / D), D_(D) {
    if (d == 0) throw ConfigError("estimator dimension must be positive");
    check_positive(D, "D");
}

void EstimatorState::accumulate(std::span<const double> hat_ell) {
    if (hat_ell.size() != hat_loss_.size()) {
        throw ConfigError("loss estimate has " + std::to_string(hat_ell.size()) +
                          " entries, expected " + std::to_string(hat_loss_.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < hat_ell.size(); ++i) {
        if (!(hat_ell[i] >= 0.0) || !std::isfinite(hat_ell[i])) {
            throw InputError("loss estimates must be finite and nonnegative (component " +
                             std::to_string(i) + ")");
        }
        s += hat_ell[i];
    }
    for (std::size_t i = 0; i < hat_ell.size(); ++i) hat_loss_[i] += hat_ell[i];
    s_last_ = s;
    S_ += s;
    ++t_;
}

EstimatorState accumulate(EstimatorState state, std::span<const double> hat_ell) {
    state.accumulate(hat_ell);
    return state;
}

}  // namespace fpltrix
