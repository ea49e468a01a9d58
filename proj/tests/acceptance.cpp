// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fpltrix/audits.hpp"
#include "fpltrix/environment.hpp"
#include "fpltrix/estimator.hpp"
#include "fpltrix/experiment.hpp"
#include "fpltrix/policy.hpp"
#include "fpltrix/schedule.hpp"
#include "support.hpp"

using namespace fpltrix;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<ExperimentResult> criterion1_runs;

nlohmann::json random_environment(std::mt19937_64& gen, std::size_t d) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> means(d);
    for (double& x : means) x = u(gen);
    switch (gen() % 4) {
        case 0: return {{"kind", "stochastic_bernoulli"}, {"means", means}};
        case 1: return {{"kind", "stochastic_uniform_means"}, {"means", means}};
        case 2:
            return {{"kind", "easy_gap"}, {"best", {gen() % d}}, {"eps", 0.3 * u(gen)},
                    {"mu", 0.3 + 0.4 * u(gen)}, {"variant", "bernoulli"}};
        default: return {{"kind", "worst_case_flip"}, {"period", 1 + gen() % 50}};
    }
}

Outcome criterion1() {
    std::mt19937_64 gen(1001);
    int passed = 0;
    int total = 0;
    double worst_margin = INFINITY;
    for (const auto& [set, d, q] : {std::tuple{"mab:d=10", 10, QMethod::quadrature_mab},
                                    std::tuple{"mset:d=8;m=2", 8, QMethod::monte_carlo}}) {
        for (int run = 0; run < 25; ++run) {
            ExperimentConfig cfg;
            cfg.decision_set = parse_set_descriptor(set)->to_json();
            cfg.horizon = 10000;
            cfg.policy.q_method = q;
            cfg.environment = random_environment(gen, d);
            cfg.seed = gen();
            auto result = run_experiment(cfg);
            const auto& rep = result.replications[0];
            ++total;
            if (!rep.error && rep.lemma2 && rep.lemma2->pass) ++passed;
            if (rep.lemma2) worst_margin = std::min(worst_margin, rep.lemma2->margin);
            criterion1_runs.push_back(std::move(result));
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d runs hold, smallest slack %.6g", passed, total, worst_margin);
    return {passed == total, buf};
}

Outcome criterion2() {
    const std::size_t d = 5;
    const std::size_t T = 10000;
    auto set = std::make_shared<MultiArmedBandit>(d);
    FplTrix policy(set, ParamSchedule::adaptive(d, 1), {QMethod::quadrature_mab});
    const auto source = LossSource::stochastic_bernoulli({0.2, 0.35, 0.5, 0.65, 0.8}, T, 2002);
    std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
        auto prng = Rng::stream(2002, {t, static_cast<std::uint64_t>(StreamTag::perturbation)});
        auto erng = Rng::stream(2002, {t, static_cast<std::uint64_t>(StreamTag::estimation)});
        const Action a = policy.draw_action(prng);
        const auto loss = source.next_loss(t);
        policy.step(a, Feedback::observe(loss, a), erng);
        const auto hat = policy.last_estimate();
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = hat[i] - loss[i];
            sum[i] += diff;
            sumsq[i] += diff * diff;
        }
    }
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < d; ++i) {
        const double mean = sum[i] / T;
        const double var = (sumsq[i] - T * mean * mean) / (T - 1);
        const double se = std::sqrt(var / T);
        ok = ok && mean <= kAuditSigmas * se;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.3g(se %.2g)", i ? " " : "mean(hat-l): ", mean, se);
        detail += buf;
    }
    return {ok, detail};
}

Outcome criterion3() {
    Rng rng(3003);
    const auto zero = audit_lemma1_tv(3, 2.0, 1'000'000, rng);
    MultiArmedBandit set(3);
    const auto tilted = audit_lemma1_tv(set, std::vector<double>{0.0, 0.3, 1.0}, 2.0, 1'000'000, rng);
    char buf[200];
    std::snprintf(buf, sizeof buf, "largest gap %.4g (zero costs), %.4g (tilted costs); beta d = %.6g",
                  zero.lhs, tilted.lhs, zero.rhs);
    return {zero.pass && tilted.pass && std::abs(zero.rhs - 3 * std::exp(-2.0)) < 1e-15, buf};
}

Outcome criterion4() {
    Rng rng(4004);
    const auto r = audit_top_m_exponentials(10, 3, 1'000'000, rng);
    const double exact = 3 * oracle::harmonic(10) - oracle::harmonic(1) - oracle::harmonic(2);
    const bool bound_ok = std::abs(r.rhs - 3 * (std::log(10.0 / 3.0) + 1)) < 1e-12;
    const bool exact_ok = std::abs(r.lhs - exact) <= kAuditSigmas * r.std_error;
    char buf[200];
    std::snprintf(buf, sizeof buf, "mean %.5f (se %.2g), exact %.5f, bound %.4f", r.lhs, r.std_error,
                  exact, r.rhs);
    return {r.pass && bound_ok && exact_ok, buf};
}

Outcome criterion5() {
    constexpr double tol = 1e-12;
    std::size_t rounds = 0;
    std::size_t bad = 0;
    for (const auto& result : criterion1_runs) {
        const auto set = make_decision_set(result.config.decision_set);
        const double m = static_cast<double>(set->max_weight());
        const double d = static_cast<double>(set->dim());
        const double D = std::log(d / m) + 1.0;
        const auto& trace = result.replications[0].trace;
        if (trace.empty() || std::abs(trace[0].params.eta - D) > tol) ++bad;
        for (std::size_t k = 0; k < trace.size(); ++k) {
            const auto& p = trace[k].params;
            ++rounds;
            bool ok = std::abs(p.gamma - m * p.eta) <= tol;
            ok = ok && std::abs(p.beta - m / d * p.eta) <= tol;
            ok = ok && p.beta * d <= p.gamma + tol;
            ok = ok && p.eta <= std::sqrt(2 * D / trace[k].S) + tol;
            if (k > 0) ok = ok && p.eta <= trace[k - 1].params.eta + tol;
            if (!ok) ++bad;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "%zu rounds over %zu runs, %zu violations", rounds,
                  criterion1_runs.size(), bad);
    return {bad == 0 && rounds == 50 * 10000, buf};
}

ExperimentResult mab10(nlohmann::json environment, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.decision_set = {{"kind", "mab"}, {"d", 10}};
    cfg.horizon = 20000;
    cfg.replications = 20;
    cfg.seed = seed;
    cfg.policy.q_method = QMethod::quadrature_mab;
    cfg.environment = std::move(environment);
    return run_experiment(cfg);
}

Outcome criterion6() {
    const auto easy = mab10({{"kind", "easy_gap"}, {"best", {0}}, {"eps", 0.01}, {"mu", 0.3}}, 6006);
    const auto hard = mab10({{"kind", "easy_gap"}, {"best", {0}}, {"eps", 0.25}, {"mu", 0.3}}, 6007);
    if (easy.aggregate.completed != 20 || hard.aggregate.completed != 20) return {false, "runs failed"};
    double bound = 0.0;
    for (const auto& rep : easy.replications) {
        bound += theoretical_bound_adaptive(10, 1, rep.metrics.lstar, 20000).value;
    }
    bound /= 20;
    const double e = easy.aggregate.mean_regret;
    const double h = hard.aggregate.mean_regret;
    char buf[200];
    std::snprintf(buf, sizeof buf, "easy %.1f (L* %.1f, bound %.1f), hard %.1f, ratio %.3f", e,
                  easy.aggregate.mean_lstar, bound, h, e / h);
    return {e < bound && e <= 0.5 * h, buf};
}

Outcome criterion7() {
    const auto r = mab10({{"kind", "worst_case_flip"}}, 7007);
    if (r.aggregate.completed != 20) return {false, "runs failed"};
    const double D = std::log(10.0) + 1.0;
    const double bound = 13 * std::sqrt(10.0 * 20000 * D) + 9.49;
    char buf[160];
    std::snprintf(buf, sizeof buf, "mean regret %.1f (se %.1f), bound %.1f", r.aggregate.mean_regret,
                  r.aggregate.stderr_regret, bound);
    return {r.aggregate.mean_regret <= bound, buf};
}

Outcome criterion8() {
    std::mt19937_64 gen(8008);
    std::size_t checked = 0;
    std::size_t mismatches = 0;
    auto run = [&](const DecisionSet& set, const std::vector<oracle::Bits>& actions) {
        for (int rep = 0; rep < 1000; ++rep) {
            const auto c = oracle::signed_costs(gen, set.dim());
            const Action a = set.linear_minimizer(c);
            const auto [bits, value] = oracle::brute_min(actions, c);
            ++checked;
            if (std::vector<std::uint8_t>(a.bits().begin(), a.bits().end()) != bits ||
                dot(a, c) != value) {
                ++mismatches;
            }
        }
    };
    for (std::size_t d = 1; d <= 6; ++d) {
        run(MultiArmedBandit(d), oracle::all_mab(d));
        for (std::size_t m = 1; m <= d; ++m) run(MSet(d, m), oracle::all_mset(d, m));
    }
    for (std::size_t n = 1; n <= 3; ++n) run(BipartiteMatching(n), oracle::all_matchings(n));
    char buf[100];
    std::snprintf(buf, sizeof buf, "%zu cost vectors, %zu mismatches", checked, mismatches);
    return {mismatches == 0, buf};
}

Outcome criterion9() {
    constexpr std::size_t K = 100'000;
    Rng rng(9009);
    MultiArmedBandit set(5);
    std::size_t outside = 0;
    double worst = 0.0;
    for (int s = 0; s < 50; ++s) {
        const double eta = 0.05 + 1.95 * rng.uniform();
        const double B = 0.5 + 5.5 * rng.uniform();
        std::vector<double> L(5);
        for (double& x : L) x = 3.0 * rng.uniform() / eta;
        const auto exact = q_exact_mab_quadrature(set, L, eta, B);
        const auto mc = estimate_q_monte_carlo(set, L, eta, B, K, rng);
        for (std::size_t i = 0; i < 5; ++i) {
            const double q = exact.q[i];
            const double sigma = std::sqrt(q * (1 - q) / K);
            const double z = std::abs(mc.q[i] - q) / std::max(sigma, 1e-300);
            worst = std::max(worst, std::abs(mc.q[i] - q) == 0.0 ? 0.0 : z);
            if (std::abs(mc.q[i] - q) > kAuditSigmas * sigma) ++outside;
        }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "250 coordinates, %zu beyond 3 sigma, largest |z| %.2f", outside, worst);
    return {outside == 0, buf};
}

Outcome criterion10() {
    Rng rng(10010);
    int passed = 0;
    MultiArmedBandit mab(3);
    for (int s = 0; s < 100; ++s) {
        const auto snap = random_snapshot(mab, rng);
        passed += audit_lemma5_quad(mab, snap, 0, rng).pass;
        passed += audit_lemma6_bias(mab, snap, 0, rng).pass;
    }
    MSet mset(4, 2);
    for (int s = 0; s < 100; ++s) {
        const auto snap = random_snapshot(mset, rng, 100'000);
        passed += audit_lemma5_quad(mset, snap, 100'000, rng).pass;
        passed += audit_lemma6_bias(mset, snap, 100'000, rng).pass;
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "%d/400 audits pass", passed);
    return {passed == 400, buf};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0: no runtime limit
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria = {
        {1, "loss-closeness audit on 50 adaptive runs", 120, criterion1},
        {2, "optimistic IX estimates", 60, criterion2},
        {3, "total variation of truncation", 60, criterion3},
        {4, "top-m exponential order statistics", 30, criterion4},
        {5, "adaptive schedule invariants", 0, criterion5},
        {6, "first-order scaling easy vs hard", 300, criterion6},
        {7, "worst-case fallback bound", 300, criterion7},
        {8, "linear oracle vs enumeration", 0, criterion8},
        {9, "Monte Carlo q vs quadrature q", 120, criterion9},
        {10, "quadratic-term and bias audits", 180, criterion10},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.limit_s == 0 || secs < c.limit_s;
        if (!in_time) out.detail += "; over time limit";
        const bool pass = out.pass && in_time;
        failures += !pass;
        std::printf("%s criterion %d: %s: %s [%.1f s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
