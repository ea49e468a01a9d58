#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "fpltrix/experiment.hpp"

namespace fpltrix {

// Trace CSV: header row then one row per round with
// t, action, loss, regret, eta, gamma, beta, B, perturbation_B, s, S, q_method, q_samples.
void write_trace_csv(const std::filesystem::path& path, const std::vector<RoundRecord>& trace);
std::vector<RoundRecord> read_trace_csv(const std::filesystem::path& path);

nlohmann::json to_json(const Metrics& metrics);
Metrics metrics_from_json(const nlohmann::json& doc);

// Config echo, per-replication metrics and audits, and the aggregate.
nlohmann::json summary_json(const ExperimentResult& result);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::filesystem::path& path);

// format "csv": trace_<k>.csv per replication (when tracing) plus
// summary.json; format "json": summary.json only.
void export_experiment(const ExperimentResult& result, const std::filesystem::path& dir,
                       const std::string& format);

}  // namespace fpltrix
