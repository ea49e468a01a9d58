#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fpltrix/errors.hpp"
#include "fpltrix/estimator.hpp"
#include "support.hpp"

using namespace fpltrix;

namespace {

double sigma_half(std::size_t K) { return std::sqrt(0.25 / static_cast<double>(K)); }

Feedback observe(const std::vector<double>& l, const Action& a) {
    return Feedback::observe(LossVector(l), a);
}

}  // namespace

TEST(MonteCarloQ, SymmetricMab) {
    MultiArmedBandit set(2);
    Rng rng(1);
    const std::size_t K = 20000;
    const auto q = estimate_q_monte_carlo(set, std::vector<double>{0, 0}, 1.0, 2.0, K, rng);
    EXPECT_EQ(q.method, QMethod::monte_carlo);
    EXPECT_EQ(q.n_samples, K);
    for (double x : q.q) EXPECT_LE(std::abs(x - 0.5), 3 * sigma_half(K));
    EXPECT_DOUBLE_EQ(q.q[0] + q.q[1], 1.0);
}

TEST(MonteCarloQ, SymmetricMSet) {
    MSet set(4, 2);
    Rng rng(2);
    const std::size_t K = 20000;
    const auto q = estimate_q_monte_carlo(set, std::vector<double>(4, 0.0), 0.7, 1.5, K, rng);
    for (double x : q.q) EXPECT_LE(std::abs(x - 0.5), 3 * sigma_half(K));
}

TEST(MonteCarloQ, SuppressedArms) {
    MultiArmedBandit set(3);
    const double eta = 0.4;
    const std::vector<double> L{0, 10 / eta, 10 / eta};
    Rng rng(3);
    const auto mc = estimate_q_monte_carlo(set, L, eta, 5.0, 5000, rng);
    EXPECT_EQ(mc.q[0], 1.0);
    const auto ex = q_exact_mab_quadrature(L, eta, 5.0);
    EXPECT_EQ(ex.q[0], 1.0);
    EXPECT_EQ(ex.q[1], 0.0);
}

TEST(MonteCarloQ, InvalidArguments) {
    MultiArmedBandit set(2);
    Rng rng(4);
    const std::vector<double> L{0, 0};
    EXPECT_THROW(estimate_q_monte_carlo(set, L, 1.0, 2.0, 0, rng), ConfigError);
    EXPECT_THROW(estimate_q_monte_carlo(set, L, 0.0, 2.0, 10, rng), ParameterError);
    EXPECT_THROW(estimate_q_monte_carlo(set, L, 1.0, 0.0, 10, rng), ParameterError);
}

TEST(DefaultSamples, Rule) {
    EXPECT_EQ(default_mc_samples(1.0), 1000u);
    EXPECT_EQ(default_mc_samples(0.001), 10000u);
    EXPECT_EQ(default_mc_samples(1e-7), 100000u);
    EXPECT_EQ(default_mc_samples(0.003), 3334u);
}

TEST(QuadratureQ, Examples) {
    const auto sym = q_exact_mab_quadrature(std::vector<double>{0, 0}, 1.0, 2.0);
    EXPECT_NEAR(sym.q[0], 0.5, 1e-12);
    EXPECT_NEAR(sym.q[1], 0.5, 1e-12);
    EXPECT_EQ(sym.n_samples, 0u);
    EXPECT_EQ(sym.method, QMethod::quadrature_mab);

    const auto gap = q_exact_mab_quadrature(std::vector<double>{0, 4}, 0.5, 2.0);
    EXPECT_EQ(gap.q[0], 1.0);
    EXPECT_EQ(gap.q[1], 0.0);
}

TEST(QuadratureQ, MatchesSimpsonOracle) {
    Rng rng(10);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t d = 2 + rep % 5;
        std::vector<double> L(d);
        const double eta = 0.1 + 2.0 * rng.uniform();
        const double B = 0.3 + 4.0 * rng.uniform();
        for (double& x : L) x = 3.0 * rng.uniform() / eta;
        const auto q = q_exact_mab_quadrature(L, eta, B);
        double total = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            EXPECT_NEAR(q.q[i], oracle::mab_q_simpson(L, eta, B, i), 1e-9);
            total += q.q[i];
        }
        EXPECT_NEAR(total, 1.0, 1e-8);
    }
}

TEST(QuadratureQ, UntruncatedMatchesLongTruncation) {
    const std::vector<double> L{0.0, 0.4, 1.3, 0.2};
    const auto q = q_exact_mab_quadrature(L, 1.0, kUntruncated);
    for (std::size_t i = 0; i < L.size(); ++i) {
        EXPECT_NEAR(q.q[i], oracle::mab_q_simpson(L, 1.0, 60.0, i), 1e-9);
    }
    // Untruncated exponentials: the minimum-cost race has a closed form for
    // d = 2: P(arm 0) = 1 - e^{-c}/2 with c = eta (L_1 - L_0) >= 0.
    const auto q2 = q_exact_mab_quadrature(std::vector<double>{0.0, 0.7}, 1.0, kUntruncated);
    EXPECT_NEAR(q2.q[0], 1.0 - 0.5 * std::exp(-0.7), 1e-12);
}

TEST(QuadratureQ, CrossCheckMonteCarlo) {
    const double eta = 0.8;
    const std::vector<double> L{0, 1 / eta, 2 / eta};
    const auto ex = q_exact_mab_quadrature(L, eta, 3.0);
    MultiArmedBandit set(3);
    Rng rng(12);
    const std::size_t K = 1000000;
    const auto mc = estimate_q_monte_carlo(set, L, eta, 3.0, K, rng);
    for (std::size_t i = 0; i < 3; ++i) {
        const double se = std::sqrt(ex.q[i] * (1 - ex.q[i]) / K);
        EXPECT_LE(std::abs(mc.q[i] - ex.q[i]), 3 * se + 1e-12) << i;
    }
}

TEST(QuadratureQ, OnlyListedArms) {
    const std::vector<double> L{0.0, 0.5, 1.0};
    const std::vector<std::size_t> only{1};
    const auto part = q_exact_mab_quadrature(L, 1.0, 2.0, only);
    const auto full = q_exact_mab_quadrature(L, 1.0, 2.0);
    EXPECT_EQ(part.q[1], full.q[1]);
    EXPECT_EQ(part.q[0], 0.0);
}

TEST(QuadratureQ, NonMabIsUnsupported) {
    MSet set(4, 2);
    EXPECT_THROW(q_exact_mab_quadrature(set, std::vector<double>(4, 0.0), 1.0, 2.0),
                 UnsupportedError);
    MultiArmedBandit mab(4);
    EXPECT_NO_THROW(q_exact_mab_quadrature(mab, std::vector<double>(4, 0.0), 1.0, 2.0));
}

TEST(IxEstimate, Examples) {
    const Action a = Action::from_string("10");
    QEstimate q{{0.4, 0.6}, QMethod::quadrature_mab, 0};
    const auto hat = ix_loss_estimate(observe({0.5, 0.9}, a), a, q, 0.1);
    EXPECT_DOUBLE_EQ(hat[0], 1.0);
    EXPECT_EQ(hat[1], 0.0);

    QEstimate q0{{0.0, 1.0}, QMethod::monte_carlo, 1000};
    const auto top = ix_loss_estimate(observe({1.0, 0.3}, a), a, q0, 0.05);
    EXPECT_DOUBLE_EQ(top[0], 20.0);
}

TEST(IxEstimate, Errors) {
    const Action a = Action::from_string("10");
    QEstimate neg{{-0.1, 1.0}, QMethod::monte_carlo, 10};
    EXPECT_THROW(ix_loss_estimate(observe({0.5, 0.5}, a), a, neg, 0.1), EstimatorStateError);
    QEstimate q{{0.5, 0.5}, QMethod::monte_carlo, 10};
    const Action other = Action::from_string("01");
    EXPECT_THROW(ix_loss_estimate(observe({0.5, 0.5}, other), a, q, 0.1), ProtocolError);
    EXPECT_THROW(ix_loss_estimate(observe({0.5, 0.5}, a), a, q, 0.0), ParameterError);
}

TEST(IxEstimate, BoundedByInverseGamma) {
    Rng rng(20);
    for (int k = 0; k < 1000; ++k) {
        const double gamma = 0.01 + rng.uniform();
        const Action a = Action::from_string("101");
        QEstimate q{{rng.uniform(), rng.uniform(), rng.uniform()}, QMethod::monte_carlo, 1};
        const auto hat =
            ix_loss_estimate(observe({rng.uniform(), 0.3, rng.uniform()}, a), a, q, gamma);
        for (double x : hat) EXPECT_LE(x, 1.0 / gamma + 1e-12);
    }
}

TEST(GeometricResampling, DeterministicComponent) {
    MultiArmedBandit set(2);
    const Action a = Action::from_string("10");
    Rng rng(30);
    const std::vector<double> L{0.0, 10.0};
    const auto hat = geometric_resampling_estimate(set, L, 1.0, 2.0, a, observe({0.7, 0.2}, a), 0.1, rng);
    EXPECT_DOUBLE_EQ(hat[0], 0.7);
    EXPECT_EQ(hat[1], 0.0);
    const auto zero = geometric_resampling_estimate(set, std::vector<double>{0, 0}, 1.0, 2.0, a,
                                                    observe({0.0, 0.2}, a), 0.1, rng);
    EXPECT_EQ(zero[0], 0.0);
}

TEST(GeometricResampling, CappedGeometricMean) {
    MultiArmedBandit set(2);
    const Action a = Action::from_string("10");
    const double gamma = 0.5;
    EXPECT_EQ(geometric_resampling_cap(gamma), 2u);
    Rng rng(31);
    const int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = geometric_resampling_estimate(set, std::vector<double>{0, 0}, 1.0, 2.0, a,
                                                       observe({1.0, 0.0}, a), gamma, rng)[0];
        EXPECT_LE(x, 2.0);
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    const double q = 0.5;
    const double expected = (1.0 - std::pow(1.0 - q, 2)) / q;
    EXPECT_DOUBLE_EQ(expected, 1.5);
    EXPECT_LE(std::abs(mean - expected), 3 * se);
}

TEST(GeometricResampling, BoundedByCap) {
    MSet set(5, 2);
    Rng rng(32);
    for (int k = 0; k < 300; ++k) {
        std::vector<double> L(5);
        for (double& x : L) x = 5 * rng.uniform();
        const double gamma = 0.05 + rng.uniform();
        const Action a = Action::from_string("01001");
        const auto hat = geometric_resampling_estimate(set, L, 1.0, 2.0, a,
                                                       observe({0.1, 1.0, 0.2, 0.3, 1.0}, a), gamma, rng);
        for (double x : hat) EXPECT_LE(x, static_cast<double>(geometric_resampling_cap(gamma)));
    }
}

TEST(EstimatorState, Examples) {
    EstimatorState s(3, 2.0);
    EXPECT_EQ(s.S(), 0.5);
    s.accumulate(std::vector<double>{0, 0, 0});
    EXPECT_EQ(s.S(), 0.5);
    s.accumulate(std::vector<double>{1, 0, 2});
    EXPECT_EQ(s.S(), 3.5);
    EXPECT_EQ(s.s_last(), 3.0);
    EXPECT_EQ(s.t(), 2u);
    EXPECT_EQ(s.hat_loss()[2], 2.0);
    const auto copy = accumulate(s, std::vector<double>{1, 1, 1});
    EXPECT_EQ(copy.S(), 6.5);
    EXPECT_EQ(s.S(), 3.5);
}

TEST(EstimatorState, ZeroRoundsKeepInitialState) {
    EstimatorState s(4, 1.7);
    for (int t = 0; t < 1000; ++t) s.accumulate(std::vector<double>(4, 0.0));
    for (double x : s.hat_loss()) EXPECT_EQ(x, 0.0);
    EXPECT_EQ(s.S(), 1.0 / 1.7);
}

TEST(EstimatorState, RejectsNegativeAndMismatch) {
    EstimatorState s(2, 1.0);
    EXPECT_THROW(s.accumulate(std::vector<double>{0.1, -0.1}), InputError);
    EXPECT_THROW(s.accumulate(std::vector<double>{0.1}), ConfigError);
    EXPECT_THROW(EstimatorState(2, 0.0), ParameterError);
}

TEST(EstimatorState, RunningTotalAfterManyRounds) {
    const double D = std::log(5.0) + 1.0;
    EstimatorState s(5, D);
    Rng rng(40);
    double total = 1.0 / D;
    std::vector<double> prev(5, 0.0);
    for (int t = 0; t < 10000; ++t) {
        std::vector<double> h(5, 0.0);
        h[rng.below(5)] = 10.0 * rng.uniform();
        s.accumulate(h);
        total += std::accumulate(h.begin(), h.end(), 0.0);
        for (std::size_t i = 0; i < 5; ++i) {
            ASSERT_GE(s.hat_loss()[i], prev[i]);
            prev[i] = s.hat_loss()[i];
        }
    }
    EXPECT_NEAR(s.S(), total, 1e-9);
}

TEST(Optimism, ExactQGivesDownwardBias) {
    // Fixed round: E[hat l_i] = l_i q_i / (q_i + gamma) <= l_i.
    MultiArmedBandit set(3);
    const std::vector<double> L{0.0, 0.8, 1.5};
    const std::vector<double> loss{0.6, 0.3, 0.9};
    const double eta = 0.9, gamma = 0.9, B = 1.2;
    const auto q = q_exact_mab_quadrature(L, eta, B);
    LeaderSampler sampler(set, L, eta, TruncationParams(B));
    Rng rng(50);
    const int n = 100000;
    std::vector<double> sum(3, 0.0), sq(3, 0.0);
    for (int k = 0; k < n; ++k) {
        const Action a = sampler.draw(rng);
        const auto hat = ix_loss_estimate(observe(loss, a), a, q, gamma);
        for (int i = 0; i < 3; ++i) {
            sum[i] += hat[i];
            sq[i] += hat[i] * hat[i];
        }
    }
    for (int i = 0; i < 3; ++i) {
        const double mean = sum[i] / n;
        const double se = std::sqrt((sq[i] / n - mean * mean) / n);
        EXPECT_LE(std::abs(mean - loss[i] * q.q[i] / (q.q[i] + gamma)), 3 * se);
        EXPECT_LE(mean, loss[i] + 3 * se);
    }
}
