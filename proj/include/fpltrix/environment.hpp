#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fpltrix/action.hpp"
#include "fpltrix/decision_set.hpp"

namespace fpltrix {

enum class LossKind { stochastic_bernoulli, stochastic_uniform_means, easy_gap, worst_case_flip, from_file };

std::string to_string(LossKind kind);

class LossSource;
LossSource make_loss_source(const nlohmann::json& spec, std::size_t d, std::size_t horizon,
                            std::uint64_t seed);

// Oblivious loss sequence l_1..l_T. next_loss(t) depends only on the source's
// parameters, its seed and t, never on what the learner played.
class LossSource {
public:
    // l_{t,i} ~ Bernoulli(mu_i)
    static LossSource stochastic_bernoulli(std::vector<double> means, std::size_t horizon,
                                           std::uint64_t seed);
    // l_{t,i} ~ Uniform[mu_i - h_i, mu_i + h_i], h_i = min(mu_i, 1 - mu_i)
    static LossSource stochastic_uniform_means(std::vector<double> means, std::size_t horizon,
                                               std::uint64_t seed);
    // Components in `best` have loss level eps, all others mu; Bernoulli draws
    // around those levels when `bernoulli` is set, otherwise constant.
    static LossSource easy_gap(std::size_t d, std::vector<std::size_t> best, double eps, double mu,
                               bool bernoulli, std::size_t horizon, std::uint64_t seed);
    // l_{t,i} = 1 when (i + floor((t-1)/period)) is even, else 0: cumulative
    // losses of all components stay within `period` of each other.
    static LossSource worst_case_flip(std::size_t d, std::size_t horizon, std::size_t period = 1);
    static LossSource from_rows(std::vector<LossVector> rows);

    LossKind kind() const;
    std::size_t dim() const { return d_; }
    std::size_t horizon() const { return horizon_; }

    // 1 <= t <= T; throws InputError otherwise.
    LossVector next_loss(std::size_t t) const;

    nlohmann::json to_json() const;

private:
    struct Bernoulli { std::vector<double> means; std::uint64_t seed; };
    struct UniformMeans { std::vector<double> means; std::uint64_t seed; };
    struct EasyGap { std::vector<std::uint8_t> is_best; double eps; double mu; bool bernoulli; std::uint64_t seed; };
    struct Flip { std::size_t period; };
    struct Rows { std::vector<LossVector> rows; };
    using Params = std::variant<Bernoulli, UniformMeans, EasyGap, Flip, Rows>;

    LossSource(std::size_t d, std::size_t horizon, Params params);
    friend LossSource make_loss_source(const nlohmann::json&, std::size_t, std::size_t,
                                       std::uint64_t);

    std::size_t d_;
    std::size_t horizon_;
    Params params_;
};

// Builds a source from {"kind": ..., ...}. `seed` is used unless the JSON
// pins one with "seed"; `horizon` is the experiment horizon (a file source
// must provide at least that many rows and is truncated to it).
LossSource make_loss_source(const nlohmann::json& spec, std::size_t d, std::size_t horizon,
                            std::uint64_t seed);

// L_T = sum_t l_t
std::vector<double> cumulative_loss(const LossSource& source);

// L*_T = min_{v in S} v^T L_T for the realized sequence.
double oracle_lstar(const LossSource& source, const DecisionSet& set);

// CSV loss files: a header line "d=<d>[,set=<descriptor>]" followed by one
// row of d comma-separated losses per round.
struct LossFile {
    std::size_t d = 0;
    std::optional<std::string> set_descriptor;
    std::vector<LossVector> rows;
};

void write_loss_csv(const std::filesystem::path& path, const LossSource& source,
                    const std::optional<std::string>& set_descriptor = std::nullopt);
LossFile read_loss_csv(const std::filesystem::path& path);

}  // namespace fpltrix
