#include "fpltrix/audits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fpltrix/errors.hpp"
#include "fpltrix/perturbation.hpp"

namespace fpltrix {

namespace {

// Running mean and standard error of the mean.
struct Moments {
    double n = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        n += 1.0;
        const double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    double std_error() const { return n > 1.0 ? std::sqrt(m2 / (n - 1.0) / n) : 0.0; }
};

double sum(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

nlohmann::json AuditReport::to_json() const {
    return {{"name", name},     {"pass", pass},       {"lhs", lhs},
            {"rhs", rhs},       {"std_error", std_error}, {"margin", margin},
            {"samples", samples}, {"detail", detail}};
}

AuditReport audit_lemma1_tv(const DecisionSet& set, std::span<const double> scaled_costs,
                            double bound, std::size_t samples, Rng& rng) {
    if (scaled_costs.size() != set.dim()) throw ConfigError("cost vector has the wrong dimension");
    if (samples == 0) throw ConfigError("audit needs at least one sample");
    const TruncationParams trunc(bound);
    const auto actions = set.enumerate_actions();
    const std::size_t d = set.dim();

    auto index_of = [&](const Action& a) {
        return static_cast<std::size_t>(std::lower_bound(actions.begin(), actions.end(), a) -
                                        actions.begin());
    };

    // Per action: sum and sum of squares of 1[V = v] - 1[V~ = v].
    std::vector<double> s1(actions.size(), 0.0), s2(actions.size(), 0.0);
    std::vector<double> costs(d), costs_tilde(d);
    for (std::size_t k = 0; k < samples; ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            const double u = rng.uniform();
            costs[i] = scaled_costs[i] - sample_truncated_exp(bound, u);
            costs_tilde[i] = scaled_costs[i] - sample_truncated_exp(kUntruncated, u);
        }
        const std::size_t a = index_of(set.linear_minimizer(costs));
        const std::size_t b = index_of(set.linear_minimizer(costs_tilde));
        if (a != b) {
            s1[a] += 1.0;
            s2[a] += 1.0;
            s1[b] -= 1.0;
            s2[b] += 1.0;
        }
    }

    AuditReport r;
    r.name = "lemma1_tv";
    r.samples = samples;
    r.rhs = trunc.beta() * static_cast<double>(d);
    r.pass = true;
    r.margin = std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(samples);
    std::size_t worst = 0;
    for (std::size_t v = 0; v < actions.size(); ++v) {
        const double mean = s1[v] / n;
        const double var = n > 1.0 ? std::max(0.0, (s2[v] - n * mean * mean) / (n - 1.0)) : 0.0;
        const double se = std::sqrt(var / n);
        const double slack = r.rhs + kAuditSigmas * se - std::abs(mean);
        if (std::abs(mean) > r.lhs) {
            r.lhs = std::abs(mean);
            r.std_error = se;
            worst = v;
        }
        if (slack < r.margin) r.margin = slack;
        if (slack < 0.0) r.pass = false;
    }
    r.detail = "largest gap at action " + actions[worst].to_string() + " of " +
               std::to_string(actions.size());
    return r;
}

AuditReport audit_lemma1_tv(std::size_t d, double bound, std::size_t samples, Rng& rng) {
    const MultiArmedBandit set(d);
    const std::vector<double> zeros(d, 0.0);
    return audit_lemma1_tv(set, zeros, bound, samples, rng);
}

AuditReport audit_lemma2(const Lemma2Input& input, const DecisionSet& set) {
    if (input.hat_loss.size() != set.dim()) throw ConfigError("estimate vector has the wrong dimension");
    const auto& p = input.last;
    if (!(p.eta > 0.0) || !(p.gamma > 0.0)) throw ParameterError("eta and gamma must be positive");
    AuditReport r;
    r.name = "lemma2";
    const double top = *std::max_element(input.hat_loss.begin(), input.hat_loss.end());
    const auto [best, value] = best_fixed_action(set, input.hat_loss);
    r.lhs = top - value;
    r.rhs = static_cast<double>(set.max_weight()) * (input.D + p.bound) / p.eta + 1.0 / p.gamma;
    r.margin = r.rhs + kAuditTolerance - r.lhs;
    r.pass = r.margin >= 0.0;
    r.detail = "minimizer " + best.to_string();
    return r;
}

RoundSnapshot random_snapshot(const DecisionSet& set, Rng& rng, std::size_t q_samples) {
    const std::size_t d = set.dim();
    const std::size_t m = set.max_weight();
    const double D = exploration_constant(d, m);
    const double dd = static_cast<double>(d);
    const double mm = static_cast<double>(m);
    if (mm / dd * D >= 1.0) throw ParameterError("snapshot needs (m/d) D < 1");

    RoundSnapshot snap;
    snap.params.eta = D * (0.02 + 0.98 * rng.uniform());
    snap.params.gamma = mm * snap.params.eta;
    snap.params.beta = mm / dd * snap.params.eta;
    snap.params.bound = -std::log(snap.params.beta);

    snap.hat_loss_prev.resize(d);
    for (double& x : snap.hat_loss_prev) x = 4.0 * rng.uniform() / snap.params.eta;
    snap.losses.resize(d);
    for (double& x : snap.losses) x = rng.uniform() < 0.2 ? 0.0 : rng.uniform();

    LeaderSampler sampler(set, snap.hat_loss_prev, snap.params.eta, TruncationParams(snap.params.bound));
    snap.played = sampler.draw(rng);
    if (set.kind() == SetKind::mab) {
        snap.q = q_exact_mab_quadrature(snap.hat_loss_prev, snap.params.eta, snap.params.bound);
    } else {
        snap.q = estimate_q_monte_carlo(set, snap.hat_loss_prev, snap.params.eta,
                                        snap.params.bound, q_samples, rng);
    }
    snap.hat_ell = ix_loss_estimate(Feedback::observe(LossVector(snap.losses), snap.played),
                                    snap.played, snap.q, snap.params.gamma);
    return snap;
}

AuditReport audit_lemma5_quad(const DecisionSet& set, const RoundSnapshot& snap,
                              std::size_t samples, Rng& rng) {
    AuditReport r;
    r.name = "lemma5_quad";
    r.rhs = static_cast<double>(set.max_weight()) * sum(snap.hat_ell);
    if (set.kind() == SetKind::mab) {
        const auto qt = q_exact_mab_quadrature(snap.hat_loss_prev, snap.params.eta, kUntruncated);
        for (std::size_t i = 0; i < snap.hat_ell.size(); ++i) {
            r.lhs += qt.q[i] * snap.hat_ell[i] * snap.hat_ell[i];
        }
        r.margin = r.rhs + kAuditTolerance - r.lhs;
        r.detail = "exact (quadrature)";
    } else {
        if (samples == 0) throw ConfigError("audit needs at least one sample");
        LeaderSampler sampler(set, snap.hat_loss_prev, snap.params.eta, TruncationParams::untruncated());
        Moments mom;
        for (std::size_t k = 0; k < samples; ++k) {
            const double x = dot(sampler.draw(rng), snap.hat_ell);
            mom.add(x * x);
        }
        r.lhs = mom.mean;
        r.std_error = mom.std_error();
        r.samples = samples;
        r.margin = r.rhs + kAuditSigmas * r.std_error + kAuditTolerance - r.lhs;
        r.detail = "Monte Carlo";
    }
    r.pass = r.margin >= 0.0;
    return r;
}

AuditReport audit_lemma6_bias(const DecisionSet& set, const RoundSnapshot& snap,
                              std::size_t samples, Rng& rng) {
    AuditReport r;
    r.name = "lemma6_bias";
    const double dd = static_cast<double>(set.dim());
    r.rhs = dot(snap.played, snap.losses) -
            (snap.params.gamma + snap.params.beta * dd) * sum(snap.hat_ell);
    if (set.kind() == SetKind::mab) {
        const auto qt = q_exact_mab_quadrature(snap.hat_loss_prev, snap.params.eta, kUntruncated);
        for (std::size_t i = 0; i < snap.hat_ell.size(); ++i) r.lhs += qt.q[i] * snap.hat_ell[i];
        r.margin = r.lhs + kAuditTolerance - r.rhs;
        r.detail = "exact (quadrature)";
    } else {
        if (samples == 0) throw ConfigError("audit needs at least one sample");
        LeaderSampler sampler(set, snap.hat_loss_prev, snap.params.eta, TruncationParams::untruncated());
        Moments mom;
        for (std::size_t k = 0; k < samples; ++k) mom.add(dot(sampler.draw(rng), snap.hat_ell));
        r.lhs = mom.mean;
        r.std_error = mom.std_error();
        r.samples = samples;
        r.margin = r.lhs + kAuditSigmas * r.std_error + kAuditTolerance - r.rhs;
        r.detail = "Monte Carlo";
    }
    r.pass = r.margin >= 0.0;
    return r;
}

AuditReport audit_top_m_exponentials(std::size_t d, std::size_t m, std::size_t samples, Rng& rng) {
    if (m == 0 || m > d) throw ConfigError("need 1 <= m <= d");
    if (samples == 0) throw ConfigError("audit needs at least one sample");
    std::vector<double> z(d);
    Moments mom;
    for (std::size_t k = 0; k < samples; ++k) {
        for (double& x : z) x = sample_truncated_exp(kUntruncated, rng.uniform());
        std::nth_element(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(m - 1), z.end(),
                         std::greater<>());
        double top = 0.0;
        for (std::size_t i = 0; i < m; ++i) top += z[i];
        mom.add(top);
    }
    AuditReport r;
    r.name = "top_m_exponentials";
    r.lhs = mom.mean;
    r.std_error = mom.std_error();
    r.rhs = static_cast<double>(m) *
            (std::log(static_cast<double>(d) / static_cast<double>(m)) + 1.0);
    r.samples = samples;
    r.margin = r.rhs + kAuditSigmas * r.std_error - r.lhs;
    r.pass = r.margin >= 0.0;
    std::ostringstream os;
    os << "d=" << d << ", m=" << m;
    r.detail = os.str();
    return r;
}

}  // namespace fpltrix
