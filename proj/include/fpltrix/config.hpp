#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "fpltrix/estimator.hpp"
#include "fpltrix/policy.hpp"
#include "fpltrix/schedule.hpp"

namespace fpltrix {

enum class PolicyKind { fpl_trix, fpl_ix_untruncated, uniform };

std::string to_string(PolicyKind kind);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::fpl_trix;
    ParamSchedule::Mode tuning = ParamSchedule::Mode::adaptive;
    QMethod q_method = QMethod::monte_carlo;
    std::size_t mc_samples = 0;  // 0: per-round default
    EstimatorKind estimator = EstimatorKind::ix;
    // Fixed tuning: explicit constants take precedence over lstar; without
    // either, L* of the realized loss sequence is used.
    std::optional<double> lstar;
    std::optional<double> eta;
    std::optional<double> gamma;
    std::optional<double> bound;
    Corollary1Numerator numerator = Corollary1Numerator::as_printed;
};

struct OutputConfig {
    std::string dir = "out";
    std::string format = "csv";  // csv: traces + summary.json; json: summary.json only
    bool trace = true;
};

// Experiment description. Only "decision_set" and "horizon" are required in
// the file; every other field has a default.
struct ExperimentConfig {
    nlohmann::json decision_set;
    PolicyConfig policy;
    nlohmann::json environment = {{"kind", "easy_gap"}, {"eps", 0.05}, {"mu", 0.5}, {"variant", "bernoulli"}};
    std::size_t horizon = 0;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    OutputConfig output;
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace fpltrix
