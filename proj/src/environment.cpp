#include "fpltrix/environment.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fpltrix/errors.hpp"
#include "fpltrix/rng.hpp"

namespace fpltrix {

namespace {

template <class... F>
struct overloaded : F... {
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

void check_means(const std::vector<double>& means) {
    if (means.empty()) throw ConfigError("loss source needs at least one component");
    for (double mu : means) {
        if (!(mu >= 0.0 && mu <= 1.0)) {
            throw ConfigError("loss means must lie in [0,1], got " + std::to_string(mu));
        }
    }
}

Rng round_rng(std::uint64_t seed, std::size_t t) {
    return Rng::stream(seed, {static_cast<std::uint64_t>(t),
                              static_cast<std::uint64_t>(StreamTag::environment)});
}

std::vector<double> json_means(const nlohmann::json& spec, std::size_t d) {
    if (!spec.contains("means") || !spec.at("means").is_array()) {
        throw ConfigError("environment needs a 'means' array");
    }
    auto means = spec.at("means").get<std::vector<double>>();
    if (means.size() != d) {
        throw ConfigError("environment has " + std::to_string(means.size()) +
                          " means but the decision set has d=" + std::to_string(d));
    }
    return means;
}

}  // namespace

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::stochastic_bernoulli: return "stochastic_bernoulli";
        case LossKind::stochastic_uniform_means: return "stochastic_uniform_means";
        case LossKind::easy_gap: return "easy_gap";
        case LossKind::worst_case_flip: return "worst_case_flip";
        case LossKind::from_file: return "from_file";
    }
    return "unknown";
}

LossSource::LossSource(std::size_t d, std::size_t horizon, Params params)
    : d_(d), horizon_(horizon), params_(std::move(params)) {}

LossSource LossSource::stochastic_bernoulli(std::vector<double> means, std::size_t horizon,
                                            std::uint64_t seed) {
    check_means(means);
    const std::size_t d = means.size();
    return LossSource(d, horizon, Bernoulli{std::move(means), seed});
}

LossSource LossSource::stochastic_uniform_means(std::vector<double> means, std::size_t horizon,
                                                std::uint64_t seed) {
    check_means(means);
    const std::size_t d = means.size();
    return LossSource(d, horizon, UniformMeans{std::move(means), seed});
}

LossSource LossSource::easy_gap(std::size_t d, std::vector<std::size_t> best, double eps,
                                double mu, bool bernoulli, std::size_t horizon,
                                std::uint64_t seed) {
    if (d == 0) throw ConfigError("loss source needs at least one component");
    if (!(eps >= 0.0 && eps <= 1.0) || !(mu >= 0.0 && mu <= 1.0)) {
        throw ConfigError("easy_gap levels must lie in [0,1]");
    }
    if (best.empty()) throw ConfigError("easy_gap needs at least one best component");
    std::vector<std::uint8_t> is_best(d, 0);
    for (std::size_t i : best) {
        if (i >= d) throw ConfigError("easy_gap best component " + std::to_string(i) + " >= d");
        is_best[i] = 1;
    }
    return LossSource(d, horizon, EasyGap{std::move(is_best), eps, mu, bernoulli, seed});
}

LossSource LossSource::worst_case_flip(std::size_t d, std::size_t horizon, std::size_t period) {
    if (d == 0) throw ConfigError("loss source needs at least one component");
    if (period == 0) throw ConfigError("worst_case_flip period must be positive");
    return LossSource(d, horizon, Flip{period});
}

LossSource LossSource::from_rows(std::vector<LossVector> rows) {
    if (rows.empty()) throw ConfigError("loss sequence has no rows");
    const std::size_t d = rows.front().size();
    if (d == 0) throw ConfigError("loss rows are empty");
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != d) {
            throw InputError("loss row " + std::to_string(t + 1) + " has " +
                             std::to_string(rows[t].size()) + " entries, expected " +
                             std::to_string(d));
        }
    }
    const std::size_t horizon = rows.size();
    return LossSource(d, horizon, Rows{std::move(rows)});
}

LossKind LossSource::kind() const {
    return std::visit(overloaded{
                          [](const Bernoulli&) { return LossKind::stochastic_bernoulli; },
                          [](const UniformMeans&) { return LossKind::stochastic_uniform_means; },
                          [](const EasyGap&) { return LossKind::easy_gap; },
                          [](const Flip&) { return LossKind::worst_case_flip; },
                          [](const Rows&) { return LossKind::from_file; },
                      },
                      params_);
}

LossVector LossSource::next_loss(std::size_t t) const {
    if (t < 1 || t > horizon_) {
        throw InputError("round " + std::to_string(t) + " outside 1.." + std::to_string(horizon_));
    }
    std::vector<double> out(d_, 0.0);
    std::visit(overloaded{
                   [&](const Bernoulli& p) {
                       Rng rng = round_rng(p.seed, t);
                       for (std::size_t i = 0; i < d_; ++i) {
                           out[i] = rng.uniform() < p.means[i] ? 1.0 : 0.0;
                       }
                   },
                   [&](const UniformMeans& p) {
                       Rng rng = round_rng(p.seed, t);
                       for (std::size_t i = 0; i < d_; ++i) {
                           const double mu = p.means[i];
                           const double h = std::min(mu, 1.0 - mu);
                           out[i] = std::clamp(mu - h + 2.0 * h * rng.uniform(), 0.0, 1.0);
                       }
                   },
                   [&](const EasyGap& p) {
                       if (p.bernoulli) {
                           Rng rng = round_rng(p.seed, t);
                           for (std::size_t i = 0; i < d_; ++i) {
                               const double level = p.is_best[i] ? p.eps : p.mu;
                               out[i] = rng.uniform() < level ? 1.0 : 0.0;
                           }
                       } else {
                           for (std::size_t i = 0; i < d_; ++i) out[i] = p.is_best[i] ? p.eps : p.mu;
                       }
                   },
                   [&](const Flip& p) {
                       const std::size_t phase = (t - 1) / p.period;
                       for (std::size_t i = 0; i < d_; ++i) out[i] = (i + phase) % 2 == 0 ? 1.0 : 0.0;
                   },
                   [&](const Rows& p) { out = std::vector<double>(p.rows[t - 1].values().begin(),
                                                                  p.rows[t - 1].values().end()); },
               },
               params_);
    return LossVector(std::move(out));
}

nlohmann::json LossSource::to_json() const {
    nlohmann::json j;
    j["kind"] = to_string(kind());
    j["d"] = d_;
    j["horizon"] = horizon_;
    std::visit(overloaded{
                   [&](const Bernoulli& p) {
                       j["means"] = p.means;
                       j["seed"] = p.seed;
                   },
                   [&](const UniformMeans& p) {
                       j["means"] = p.means;
                       j["seed"] = p.seed;
                   },
                   [&](const EasyGap& p) {
                       std::vector<std::size_t> best;
                       for (std::size_t i = 0; i < p.is_best.size(); ++i) {
                           if (p.is_best[i]) best.push_back(i);
                       }
                       j["best"] = best;
                       j["eps"] = p.eps;
                       j["mu"] = p.mu;
                       j["variant"] = p.bernoulli ? "bernoulli" : "constant";
                       j["seed"] = p.seed;
                   },
                   [&](const Flip& p) { j["period"] = p.period; },
                   [&](const Rows& p) { j["rows"] = p.rows.size(); },
               },
               params_);
    return j;
}

LossSource make_loss_source(const nlohmann::json& spec, std::size_t d, std::size_t horizon,
                            std::uint64_t seed) {
    if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
        throw ConfigError("environment needs a string 'kind'");
    }
    const auto kind = spec.at("kind").get<std::string>();
    if (spec.contains("seed")) {
        const auto& s = spec.at("seed");
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<long long>() < 0)) {
            throw ConfigError("environment 'seed' must be a nonnegative integer");
        }
        seed = s.get<std::uint64_t>();
    }

    try {
        if (kind == "stochastic_bernoulli") {
            return LossSource::stochastic_bernoulli(json_means(spec, d), horizon, seed);
        }
        if (kind == "stochastic_uniform_means") {
            return LossSource::stochastic_uniform_means(json_means(spec, d), horizon, seed);
        }
        if (kind == "easy_gap") {
            std::vector<std::size_t> best{0};
            if (spec.contains("best")) {
                const auto& b = spec.at("best");
                best = b.is_array() ? b.get<std::vector<std::size_t>>()
                                    : std::vector<std::size_t>{b.get<std::size_t>()};
            }
            const double eps = spec.value("eps", 0.05);
            const double mu = spec.value("mu", 0.5);
            const auto variant = spec.value("variant", std::string("bernoulli"));
            if (variant != "bernoulli" && variant != "constant") {
                throw ConfigError("easy_gap variant must be 'bernoulli' or 'constant'");
            }
            return LossSource::easy_gap(d, std::move(best), eps, mu, variant == "bernoulli",
                                        horizon, seed);
        }
        if (kind == "worst_case_flip") {
            return LossSource::worst_case_flip(d, horizon, spec.value("period", std::size_t{1}));
        }
        if (kind == "from_file") {
            if (!spec.contains("path")) throw ConfigError("from_file environment needs 'path'");
            LossFile file = read_loss_csv(spec.at("path").get<std::string>());
            if (file.d != d) {
                throw ConfigError("loss file has d=" + std::to_string(file.d) +
                                  " but the decision set has d=" + std::to_string(d));
            }
            if (file.rows.size() < horizon) {
                throw ConfigError("loss file has " + std::to_string(file.rows.size()) +
                                  " rows, fewer than the horizon " + std::to_string(horizon));
            }
            file.rows.resize(horizon);
            if (horizon == 0) {
                return LossSource(d, 0, LossSource::Rows{});
            }
            return LossSource::from_rows(std::move(file.rows));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed environment: ") + e.what());
    }
    throw ConfigError("unknown environment kind '" + kind + "'");
}

std::vector<double> cumulative_loss(const LossSource& source) {
    std::vector<double> total(source.dim(), 0.0);
    for (std::size_t t = 1; t <= source.horizon(); ++t) {
        const LossVector l = source.next_loss(t);
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += l[i];
    }
    return total;
}

double oracle_lstar(const LossSource& source, const DecisionSet& set) {
    if (source.dim() != set.dim()) {
        throw ConfigError("loss source has d=" + std::to_string(source.dim()) +
                          " but the decision set has d=" + std::to_string(set.dim()));
    }
    return best_fixed_action(set, cumulative_loss(source)).second;
}

void write_loss_csv(const std::filesystem::path& path, const LossSource& source,
                    const std::optional<std::string>& set_descriptor) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << "d=" << source.dim();
    if (set_descriptor) out << ",set=" << *set_descriptor;
    out << '\n';
    char buf[32];
    for (std::size_t t = 1; t <= source.horizon(); ++t) {
        const LossVector l = source.next_loss(t);
        for (std::size_t i = 0; i < l.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", l[i]);
            if (i > 0) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

LossFile read_loss_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open loss file '" + path.string() + "'");
    const std::string where = "loss file '" + path.string() + "'";

    std::string line;
    if (!std::getline(in, line)) throw InputError(where + " is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    LossFile file;
    if (line.rfind("d=", 0) != 0) throw InputError(where + ": header must start with 'd='");
    const auto comma = line.find(",set=");
    const std::string dpart = line.substr(2, comma == std::string::npos ? std::string::npos : comma - 2);
    char* end = nullptr;
    const unsigned long long d = std::strtoull(dpart.c_str(), &end, 10);
    if (dpart.empty() || *end != '\0' || d == 0) throw InputError(where + ": bad dimension in header");
    file.d = static_cast<std::size_t>(d);
    if (comma != std::string::npos) file.set_descriptor = line.substr(comma + 5);

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* cend = nullptr;
            const double v = std::strtod(cell.c_str(), &cend);
            if (cell.empty() || *cend != '\0') {
                throw InputError(where + " line " + std::to_string(lineno) + ": bad value '" + cell + "'");
            }
            row.push_back(v);
        }
        if (row.size() != file.d) {
            throw InputError(where + " line " + std::to_string(lineno) + ": expected " +
                             std::to_string(file.d) + " values, got " + std::to_string(row.size()));
        }
        try {
            file.rows.emplace_back(std::move(row));
        } catch (const InputError& e) {
            throw InputError(where + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return file;
}

}  // namespace fpltrix
