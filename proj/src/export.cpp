#include "fpltrix/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fpltrix/errors.hpp"

namespace fpltrix {

namespace {

constexpr const char* kTraceHeader =
    "t,action,loss,regret,eta,gamma,beta,B,perturbation_B,s,S,q_method,q_samples";

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_num(const std::string& cell, const std::string& where) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') throw InputError(where + ": bad number '" + cell + "'");
    return v;
}

std::size_t parse_count(const std::string& cell, const std::string& where) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(cell.c_str(), &end, 10);
    if (cell.empty() || *end != '\0') throw InputError(where + ": bad integer '" + cell + "'");
    return static_cast<std::size_t>(v);
}

nlohmann::json bound_json(const AdaptiveBound& b) {
    return {{"first_order", b.first_order}, {"worst_case", b.worst_case}, {"value", b.value}};
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path, const std::vector<RoundRecord>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << kTraceHeader << '\n';
    for (const auto& r : trace) {
        out << r.t << ',' << r.action.to_string() << ',' << num(r.loss) << ','
            << num(r.regret_to_date) << ',' << num(r.params.eta) << ',' << num(r.params.gamma)
            << ',' << num(r.params.beta) << ',' << num(r.params.bound) << ','
            << num(r.perturbation_bound) << ',' << num(r.s) << ',' << num(r.S) << ','
            << r.q_method << ',' << r.q_samples << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::vector<RoundRecord> read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open trace '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != kTraceHeader) {
        throw InputError("trace '" + path.string() + "' has an unexpected header");
    }
    std::vector<RoundRecord> trace;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::string where = "trace '" + path.string() + "' line " + std::to_string(lineno);
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 13) throw InputError(where + ": expected 13 columns");
        RoundRecord r;
        r.t = parse_count(cells[0], where);
        r.action = Action::from_string(cells[1]);
        r.loss = parse_num(cells[2], where);
        r.regret_to_date = parse_num(cells[3], where);
        r.params.eta = parse_num(cells[4], where);
        r.params.gamma = parse_num(cells[5], where);
        r.params.beta = parse_num(cells[6], where);
        r.params.bound = parse_num(cells[7], where);
        r.perturbation_bound = parse_num(cells[8], where);
        r.s = parse_num(cells[9], where);
        r.S = parse_num(cells[10], where);
        r.q_method = cells[11];
        r.q_samples = parse_count(cells[12], where);
        trace.push_back(std::move(r));
    }
    return trace;
}

nlohmann::json to_json(const Metrics& m) {
    return {
        {"learner_loss", m.learner_loss},
        {"cumulative_loss", m.cumulative_loss},
        {"lstar", m.lstar},
        {"best_action", m.best_action.to_string()},
        {"regret", m.regret},
        {"regret_trajectory", m.regret_trajectory},
        {"bound", bound_json(m.bound)},
    };
}

Metrics metrics_from_json(const nlohmann::json& doc) {
    try {
        Metrics m;
        m.learner_loss = doc.at("learner_loss").get<double>();
        m.cumulative_loss = doc.at("cumulative_loss").get<std::vector<double>>();
        m.lstar = doc.at("lstar").get<double>();
        m.best_action = Action::from_string(doc.at("best_action").get<std::string>());
        m.regret = doc.at("regret").get<double>();
        m.regret_trajectory = doc.at("regret_trajectory").get<std::vector<double>>();
        const auto& b = doc.at("bound");
        m.bound.first_order = b.at("first_order").get<double>();
        m.bound.worst_case = b.at("worst_case").get<double>();
        m.bound.value = b.at("value").get<double>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed metrics: ") + e.what());
    }
}

nlohmann::json summary_json(const ExperimentResult& result) {
    nlohmann::json config = to_json(result.config);
    config.erase("jobs");  // the output does not depend on it
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& rep : result.replications) {
        nlohmann::json r = {{"index", rep.index}, {"environment_seed", rep.environment_seed}};
        if (rep.error) {
            r["error"] = {{"kind", rep.error->kind}, {"message", rep.error->message}};
        } else {
            r["metrics"] = to_json(rep.metrics);
            r["audits"] = nlohmann::json::array();
            if (rep.lemma2) r["audits"].push_back(rep.lemma2->to_json());
        }
        reps.push_back(std::move(r));
    }
    const auto& a = result.aggregate;
    return {
        {"config", config},
        {"replications", reps},
        {"aggregate",
         {{"completed", a.completed},
          {"mean_regret", a.mean_regret},
          {"stderr_regret", a.stderr_regret},
          {"mean_lstar", a.mean_lstar},
          {"mean_learner_loss", a.mean_learner_loss},
          {"mean_bound", a.mean_bound}}},
    };
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("'" + path.string() + "': " + e.what());
    }
}

void export_experiment(const ExperimentResult& result, const std::filesystem::path& dir,
                       const std::string& format) {
    if (format != "csv" && format != "json") {
        throw ConfigError("output format must be 'csv' or 'json', got '" + format + "'");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    if (format == "csv" && result.config.output.trace) {
        for (const auto& rep : result.replications) {
            write_trace_csv(dir / ("trace_" + std::to_string(rep.index) + ".csv"), rep.trace);
        }
    }
    write_json(dir / "summary.json", summary_json(result));
}

}  // namespace fpltrix
