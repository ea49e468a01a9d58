#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fpltrix/environment.hpp"
#include "fpltrix/errors.hpp"

using namespace fpltrix;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "fpltrix_env_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

}  // namespace

TEST(NextLoss, EasyGapZeroBestComponent) {
    const auto src = LossSource::easy_gap(5, {2}, 0.0, 0.5, true, 2000, 1);
    EXPECT_EQ(src.kind(), LossKind::easy_gap);
    for (std::size_t t = 1; t <= 2000; ++t) EXPECT_EQ(src.next_loss(t)[2], 0.0);
}

TEST(NextLoss, BernoulliMeans) {
    const std::vector<double> mu{0.1, 0.5, 0.85};
    const std::size_t T = 100000;
    const auto src = LossSource::stochastic_bernoulli(mu, T, 2);
    std::vector<double> sum(3, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
        const auto l = src.next_loss(t);
        for (std::size_t i = 0; i < 3; ++i) {
            ASSERT_TRUE(l[i] == 0.0 || l[i] == 1.0);
            sum[i] += l[i];
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_LE(std::abs(sum[i] / T - mu[i]), 3 * std::sqrt(mu[i] * (1 - mu[i]) / T));
    }
}

TEST(NextLoss, UniformAroundMeans) {
    const std::vector<double> mu{0.2, 0.5, 0.9};
    const std::size_t T = 50000;
    const auto src = LossSource::stochastic_uniform_means(mu, T, 3);
    std::vector<double> sum(3, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
        const auto l = src.next_loss(t);
        for (std::size_t i = 0; i < 3; ++i) {
            const double h = std::min(mu[i], 1 - mu[i]);
            ASSERT_GE(l[i], mu[i] - h);
            ASSERT_LE(l[i], mu[i] + h);
            sum[i] += l[i];
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const double h = std::min(mu[i], 1 - mu[i]);
        const double sd = 2 * h / std::sqrt(12.0);
        EXPECT_LE(std::abs(sum[i] / T - mu[i]), 3 * sd / std::sqrt(static_cast<double>(T)));
    }
}

TEST(NextLoss, RangeAndDeterminism) {
    const auto src = LossSource::stochastic_bernoulli({0.3, 0.7}, 10, 9);
    EXPECT_THROW(src.next_loss(0), InputError);
    EXPECT_THROW(src.next_loss(11), InputError);
    EXPECT_EQ(src.next_loss(4), src.next_loss(4));
}

TEST(NextLoss, ObliviousToCallOrder) {
    const auto a = LossSource::stochastic_uniform_means({0.3, 0.6, 0.5}, 200, 17);
    const auto b = LossSource::stochastic_uniform_means({0.3, 0.6, 0.5}, 200, 17);
    std::vector<LossVector> forward, backward(200);
    for (std::size_t t = 1; t <= 200; ++t) forward.push_back(a.next_loss(t));
    for (std::size_t t = 200; t >= 1; --t) {
        b.next_loss(1 + (t * 7) % 200);  // unrelated queries in between
        backward[t - 1] = b.next_loss(t);
    }
    EXPECT_EQ(forward, backward);
}

TEST(NextLoss, WorstCaseFlipKeepsTotalsClose) {
    for (std::size_t period : {1u, 3u}) {
        const auto src = LossSource::worst_case_flip(6, 1000, period);
        std::vector<double> L(6, 0.0);
        for (std::size_t t = 1; t <= 1000; ++t) {
            const auto l = src.next_loss(t);
            double row = 0.0;
            for (std::size_t i = 0; i < 6; ++i) {
                L[i] += l[i];
                row += l[i];
            }
            EXPECT_EQ(row, 3.0);
            const auto [lo, hi] = std::minmax_element(L.begin(), L.end());
            EXPECT_LE(*hi - *lo, static_cast<double>(period));
        }
    }
}

TEST(LossFile, RoundTripExact) {
    const auto src = LossSource::stochastic_uniform_means({0.1, 0.37, 0.5, 0.93}, 50, 5);
    const auto path = temp_file("roundtrip.csv");
    write_loss_csv(path, src, std::string("mset:d=4;m=2"));
    const auto file = read_loss_csv(path);
    EXPECT_EQ(file.d, 4u);
    ASSERT_TRUE(file.set_descriptor.has_value());
    EXPECT_EQ(*file.set_descriptor, "mset:d=4;m=2");
    ASSERT_EQ(file.rows.size(), 50u);
    for (std::size_t t = 1; t <= 50; ++t) EXPECT_EQ(file.rows[t - 1], src.next_loss(t));

    const auto again = LossSource::from_rows(file.rows);
    EXPECT_EQ(again.kind(), LossKind::from_file);
    EXPECT_EQ(again.next_loss(7), src.next_loss(7));
}

TEST(LossFile, MalformedInput) {
    const auto p = temp_file("bad.csv");
    write_text(p, "rows=2\n0,1\n");
    EXPECT_THROW(read_loss_csv(p), InputError);
    write_text(p, "d=2\n0,1\n0.5\n");
    EXPECT_THROW(read_loss_csv(p), InputError);
    write_text(p, "d=2\n0,abc\n");
    EXPECT_THROW(read_loss_csv(p), InputError);
    write_text(p, "d=2\n0,1.5\n");
    EXPECT_THROW(read_loss_csv(p), InputError);
    EXPECT_THROW(read_loss_csv(temp_file("missing.csv")), IoError);
}

TEST(OracleLstar, Examples) {
    MultiArmedBandit mab(3);
    EXPECT_EQ(oracle_lstar(LossSource::easy_gap(3, {0}, 0.0, 0.0, false, 100, 0), mab), 0.0);

    const std::size_t T = 1000;
    const auto src = LossSource::easy_gap(10, {0}, 0.01, 0.3, true, T, 12);
    std::vector<double> L(10, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
        const auto l = src.next_loss(t);
        for (std::size_t i = 0; i < 10; ++i) L[i] += l[i];
    }
    const double expected = *std::min_element(L.begin(), L.end());
    const double lstar = oracle_lstar(src, MultiArmedBandit(10));
    EXPECT_EQ(lstar, expected);
    EXPECT_NEAR(lstar, 10.0, 10.0);

    MSet mset(4, 2);
    const auto det = LossSource::stochastic_bernoulli({0.0, 0.0, 0.5, 0.9}, 100, 3);
    EXPECT_EQ(oracle_lstar(det, mset), 0.0);
}

TEST(MakeLossSource, FromJson) {
    const auto a = make_loss_source({{"kind", "stochastic_bernoulli"}, {"means", {0.1, 0.2}}}, 2, 10, 1);
    EXPECT_EQ(a.kind(), LossKind::stochastic_bernoulli);
    EXPECT_EQ(a.horizon(), 10u);
    const auto pinned = make_loss_source({{"kind", "easy_gap"}, {"seed", 5}}, 3, 10, 1);
    const auto same = make_loss_source({{"kind", "easy_gap"}}, 3, 10, 5);
    for (std::size_t t = 1; t <= 10; ++t) EXPECT_EQ(pinned.next_loss(t), same.next_loss(t));
    EXPECT_EQ(pinned.to_json()["seed"], 5);

    EXPECT_THROW(make_loss_source({{"kind", "stochastic_bernoulli"}, {"means", {0.1}}}, 2, 10, 1), ConfigError);
    EXPECT_THROW(make_loss_source({{"kind", "stochastic_bernoulli"}, {"means", {0.1, 1.2}}}, 2, 10, 1), ConfigError);
    EXPECT_THROW(make_loss_source({{"kind", "adaptive"}}, 2, 10, 1), ConfigError);
    EXPECT_THROW(make_loss_source({{"kind", "easy_gap"}, {"best", {7}}}, 2, 10, 1), ConfigError);
}

TEST(MakeLossSource, FromFile) {
    const auto path = temp_file("from_file.csv");
    write_loss_csv(path, LossSource::worst_case_flip(3, 20));
    const auto src = make_loss_source({{"kind", "from_file"}, {"path", path.string()}}, 3, 15, 0);
    EXPECT_EQ(src.horizon(), 15u);
    EXPECT_EQ(src.next_loss(2), LossSource::worst_case_flip(3, 20).next_loss(2));
    EXPECT_THROW(make_loss_source({{"kind", "from_file"}, {"path", path.string()}}, 3, 25, 0), ConfigError);
    EXPECT_THROW(make_loss_source({{"kind", "from_file"}, {"path", path.string()}}, 4, 10, 0), ConfigError);
    const auto empty = make_loss_source({{"kind", "from_file"}, {"path", path.string()}}, 3, 0, 0);
    EXPECT_EQ(empty.horizon(), 0u);
}
