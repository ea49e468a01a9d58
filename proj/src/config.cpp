#include "fpltrix/config.hpp"

#include <fstream>
#include <set>

#include "fpltrix/decision_set.hpp"
#include "fpltrix/errors.hpp"

namespace fpltrix {

namespace {

void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& known,
                    const std::string& section) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + section);
        }
    }
}

std::size_t positive_size(const nlohmann::json& v, const std::string& name, bool allow_zero) {
    if (!v.is_number_integer() || v.get<long long>() < (allow_zero ? 0 : 1)) {
        throw ConfigError("'" + name + "' must be a " + (allow_zero ? "nonnegative" : "positive") +
                          " integer");
    }
    return v.get<std::size_t>();
}

std::optional<double> optional_number(const nlohmann::json& obj, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    if (!obj.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    return obj.at(key).get<double>();
}

PolicyKind parse_policy_kind(const std::string& name) {
    if (name == "fpl_trix") return PolicyKind::fpl_trix;
    if (name == "fpl_ix_untruncated") return PolicyKind::fpl_ix_untruncated;
    if (name == "uniform") return PolicyKind::uniform;
    throw ConfigError("unknown policy '" + name + "'");
}

PolicyConfig parse_policy(const nlohmann::json& p) {
    if (!p.is_object()) throw ConfigError("'policy' must be an object");
    reject_unknown(p, {"kind", "tuning", "q_method", "mc_samples", "estimator", "lstar", "eta",
                       "gamma", "bound", "numerator"},
                   "policy");
    PolicyConfig pc;
    pc.kind = parse_policy_kind(p.value("kind", std::string("fpl_trix")));
    const auto tuning = p.value("tuning", std::string("adaptive"));
    if (tuning == "adaptive") {
        pc.tuning = ParamSchedule::Mode::adaptive;
    } else if (tuning == "fixed") {
        pc.tuning = ParamSchedule::Mode::fixed;
    } else {
        throw ConfigError("policy tuning must be 'adaptive' or 'fixed', got '" + tuning + "'");
    }
    pc.q_method = parse_q_method(p.value("q_method", std::string("monte_carlo")));
    if (p.contains("mc_samples")) pc.mc_samples = positive_size(p.at("mc_samples"), "mc_samples", true);
    pc.estimator = parse_estimator_kind(p.value("estimator", std::string("ix")));
    pc.lstar = optional_number(p, "lstar");
    pc.eta = optional_number(p, "eta");
    pc.gamma = optional_number(p, "gamma");
    pc.bound = optional_number(p, "bound");
    pc.numerator = parse_corollary1_numerator(p.value("numerator", std::string("as_printed")));
    if (pc.lstar && !(*pc.lstar >= 0.0)) throw ConfigError("'lstar' must be nonnegative");
    if ((pc.gamma || pc.bound) && !pc.eta) {
        throw ConfigError("'gamma' and 'bound' need an explicit 'eta'");
    }
    if (pc.tuning == ParamSchedule::Mode::adaptive && (pc.eta || pc.lstar)) {
        throw ConfigError("'eta' and 'lstar' only apply to fixed tuning");
    }
    return pc;
}

}  // namespace

std::string to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::fpl_trix: return "fpl_trix";
        case PolicyKind::fpl_ix_untruncated: return "fpl_ix_untruncated";
        case PolicyKind::uniform: return "uniform";
    }
    return "unknown";
}

ExperimentConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, {"decision_set", "policy", "environment", "horizon", "replications",
                         "seed", "jobs", "output"},
                   "config");
    ExperimentConfig cfg;
    try {
        if (!doc.contains("decision_set")) throw ConfigError("config is missing 'decision_set'");
        if (!doc.contains("horizon")) throw ConfigError("config is missing 'horizon'");

        const auto& ds = doc.at("decision_set");
        cfg.decision_set = ds.is_string() ? parse_set_descriptor(ds.get<std::string>())->to_json()
                                          : ds;
        make_decision_set(cfg.decision_set);  // validate early

        cfg.horizon = positive_size(doc.at("horizon"), "horizon", true);
        if (doc.contains("policy")) cfg.policy = parse_policy(doc.at("policy"));
        if (doc.contains("environment")) {
            if (!doc.at("environment").is_object()) throw ConfigError("'environment' must be an object");
            cfg.environment = doc.at("environment");
        }
        if (doc.contains("replications")) {
            cfg.replications = positive_size(doc.at("replications"), "replications", false);
        }
        if (doc.contains("seed")) {
            const auto& seed = doc.at("seed");
            if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<long long>() < 0)) {
                throw ConfigError("'seed' must be a nonnegative integer");
            }
            cfg.seed = seed.get<std::uint64_t>();
        }
        if (doc.contains("jobs")) cfg.jobs = positive_size(doc.at("jobs"), "jobs", false);
        if (doc.contains("output")) {
            const auto& o = doc.at("output");
            if (!o.is_object()) throw ConfigError("'output' must be an object");
            reject_unknown(o, {"dir", "format", "trace"}, "output");
            cfg.output.dir = o.value("dir", cfg.output.dir);
            cfg.output.format = o.value("format", cfg.output.format);
            cfg.output.trace = o.value("trace", cfg.output.trace);
        }
        if (cfg.output.format != "csv" && cfg.output.format != "json") {
            throw ConfigError("output format must be 'csv' or 'json', got '" + cfg.output.format + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
    try {
        return parse_config(doc);
    } catch (const ConfigError& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

nlohmann::json to_json(const ExperimentConfig& config) {
    const auto& pc = config.policy;
    nlohmann::json policy = {
        {"kind", to_string(pc.kind)},
        {"tuning", to_string(pc.tuning)},
        {"q_method", to_string(pc.q_method)},
        {"mc_samples", pc.mc_samples},
        {"estimator", to_string(pc.estimator)},
        {"numerator", to_string(pc.numerator)},
    };
    if (pc.lstar) policy["lstar"] = *pc.lstar;
    if (pc.eta) policy["eta"] = *pc.eta;
    if (pc.gamma) policy["gamma"] = *pc.gamma;
    if (pc.bound) policy["bound"] = *pc.bound;
    return {
        {"decision_set", config.decision_set},
        {"policy", policy},
        {"environment", config.environment},
        {"horizon", config.horizon},
        {"replications", config.replications},
        {"seed", config.seed},
        {"jobs", config.jobs},
        {"output", {{"dir", config.output.dir}, {"format", config.output.format}, {"trace", config.output.trace}}},
    };
}

}  // namespace fpltrix
