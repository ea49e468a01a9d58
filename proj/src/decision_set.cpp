#include "fpltrix/decision_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "fpltrix/assignment.hpp"
#include "fpltrix/errors.hpp"

namespace fpltrix {

namespace {

// Incidence-vector order of two sorted index lists: true iff a < b.
bool lex_less_sorted(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++i;
            ++j;
        } else {
            // The smaller index is set in one vector only; that vector is larger.
            return a[i] > b[j];
        }
    }
    return i == a.size() && j < b.size();
}

double falling_factorial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 0; i < k; ++i) r *= static_cast<double>(n - i);
    return r;
}

std::size_t json_size(const nlohmann::json& spec, const char* key) {
    if (!spec.contains(key)) {
        throw ConfigError(std::string("decision set is missing '") + key + "'");
    }
    const auto& v = spec.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(std::string("decision set field '") + key +
                          "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

std::string to_string(SetKind kind) {
    switch (kind) {
        case SetKind::mab: return "mab";
        case SetKind::mset: return "mset";
        case SetKind::matching: return "matching";
        case SetKind::dagpath: return "dagpath";
    }
    return "unknown";
}

DecisionSet::DecisionSet(std::size_t d, std::size_t m) : d_(d), m_(m) {
    if (m < 1 || m > d) {
        throw ConfigError("decision set needs 1 <= m <= d (d=" + std::to_string(d) +
                          ", m=" + std::to_string(m) + ")");
    }
}

Action DecisionSet::linear_minimizer(std::span<const double> costs) const {
    if (costs.size() != d_) {
        throw ConfigError("cost vector has " + std::to_string(costs.size()) +
                          " entries, decision set has d=" + std::to_string(d_));
    }
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (!std::isfinite(costs[i])) {
            throw InputError("cost entry " + std::to_string(i) + " is not finite");
        }
    }
    return minimize(costs);
}

std::vector<Action> DecisionSet::enumerate_actions(std::size_t cap) const {
    const double n = count_actions();
    if (n > static_cast<double>(cap)) {
        std::ostringstream msg;
        msg << "decision set " << descriptor() << " has " << n << " actions, more than the cap "
            << cap << "; not enumerable";
        throw NotEnumerableError(msg.str());
    }
    auto actions = enumerate_unchecked();
    std::sort(actions.begin(), actions.end());
    return actions;
}

bool DecisionSet::contains(const Action& a) const {
    if (a.size() != d_) {
        throw ConfigError("action has " + std::to_string(a.size()) +
                          " components, decision set has d=" + std::to_string(d_));
    }
    return a.weight() <= m_ && is_member(a);
}

// --- multi-armed bandit ----------------------------------------------------

MultiArmedBandit::MultiArmedBandit(std::size_t d) : DecisionSet(d, 1) {}

std::string MultiArmedBandit::descriptor() const { return "mab:d=" + std::to_string(dim()); }

nlohmann::json MultiArmedBandit::to_json() const { return {{"kind", "mab"}, {"d", dim()}}; }

double MultiArmedBandit::count_actions() const { return static_cast<double>(dim()); }

Action MultiArmedBandit::sample_uniform(Rng& rng) const {
    Action a(dim());
    a.set(rng.below(dim()));
    return a;
}

Action MultiArmedBandit::minimize(std::span<const double> costs) const {
    // On ties the later arm has the smaller incidence vector.
    std::size_t best = 0;
    for (std::size_t i = 1; i < costs.size(); ++i) {
        if (costs[i] <= costs[best]) best = i;
    }
    Action a(dim());
    a.set(best);
    return a;
}

std::vector<Action> MultiArmedBandit::enumerate_unchecked() const {
    std::vector<Action> out;
    for (std::size_t i = 0; i < dim(); ++i) {
        Action a(dim());
        a.set(i);
        out.push_back(std::move(a));
    }
    return out;
}

bool MultiArmedBandit::is_member(const Action& a) const { return a.weight() == 1; }

// --- m-sets ----------------------------------------------------------------

MSet::MSet(std::size_t d, std::size_t m) : DecisionSet(d, m) {}

std::string MSet::descriptor() const {
    return "mset:d=" + std::to_string(dim()) + ";m=" + std::to_string(max_weight());
}

nlohmann::json MSet::to_json() const {
    return {{"kind", "mset"}, {"d", dim()}, {"m", max_weight()}};
}

double MSet::count_actions() const {
    const std::size_t d = dim();
    const std::size_t m = std::min(max_weight(), d - max_weight());
    double c = 1.0;
    for (std::size_t i = 1; i <= m; ++i) {
        c = c * static_cast<double>(d - m + i) / static_cast<double>(i);
    }
    return std::round(c);
}

Action MSet::sample_uniform(Rng& rng) const {
    std::vector<std::size_t> idx(dim());
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < max_weight(); ++i) {
        std::swap(idx[i], idx[i + rng.below(dim() - i)]);
    }
    return Action::from_indices(dim(), std::span(idx).first(max_weight()));
}

Action MSet::minimize(std::span<const double> costs) const {
    // Strict total order: cheaper first, later index first among equal costs.
    auto before = [&](std::size_t a, std::size_t b) {
        return costs[a] < costs[b] || (costs[a] == costs[b] && a > b);
    };
    const std::size_t m = max_weight();
    Action a(dim());
    if (m <= 8) {
        // Insertion into a short sorted list beats a full selection for small m.
        std::size_t top[8];
        std::size_t n = 0;
        for (std::size_t i = 0; i < dim(); ++i) {
            if (n == m && !before(i, top[n - 1])) continue;
            std::size_t k = n < m ? n++ : n - 1;
            while (k > 0 && before(i, top[k - 1])) {
                top[k] = top[k - 1];
                --k;
            }
            top[k] = i;
        }
        for (std::size_t k = 0; k < m; ++k) a.set(top[k]);
        return a;
    }
    thread_local std::vector<std::size_t> idx;
    idx.resize(dim());
    std::iota(idx.begin(), idx.end(), 0);
    if (m < dim()) {
        std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(), before);
    }
    for (std::size_t k = 0; k < m; ++k) a.set(idx[k]);
    return a;
}

std::vector<Action> MSet::enumerate_unchecked() const {
    std::vector<Action> out;
    std::vector<std::uint8_t> mask(dim(), 0);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(max_weight()), 1);
    // prev_permutation walks the masks from 11..100 down to 00..011.
    do {
        out.emplace_back(mask);
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

bool MSet::is_member(const Action& a) const { return a.weight() == max_weight(); }

// --- bipartite matchings ---------------------------------------------------

BipartiteMatching::BipartiteMatching(std::size_t rows, std::size_t cols)
    : DecisionSet(rows * cols, rows), rows_(rows), cols_(cols) {
    if (rows < 1 || cols < rows) {
        throw ConfigError("matching needs 1 <= rows <= cols");
    }
}

std::string BipartiteMatching::descriptor() const {
    if (rows_ == cols_) return "matching:n=" + std::to_string(rows_);
    return "matching:rows=" + std::to_string(rows_) + ";cols=" + std::to_string(cols_);
}

nlohmann::json BipartiteMatching::to_json() const {
    if (rows_ == cols_) return {{"kind", "matching"}, {"n", rows_}};
    return {{"kind", "matching"}, {"rows", rows_}, {"cols", cols_}};
}

double BipartiteMatching::count_actions() const { return falling_factorial(cols_, rows_); }

Action BipartiteMatching::from_assignment(std::span<const std::size_t> row_to_col) const {
    Action a(dim());
    for (std::size_t r = 0; r < rows_; ++r) a.set(r * cols_ + row_to_col[r]);
    return a;
}

Action BipartiteMatching::sample_uniform(Rng& rng) const {
    std::vector<std::size_t> cols(cols_);
    std::iota(cols.begin(), cols.end(), 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        std::swap(cols[i], cols[i + rng.below(cols_ - i)]);
    }
    return from_assignment(std::span(cols).first(rows_));
}

Action BipartiteMatching::minimize(std::span<const double> costs) const {
    const AssignmentResult first = solve_assignment(costs, rows_, cols_);

    double scale = 1.0;
    for (double c : costs) scale = std::max(scale, std::abs(c));
    const double tight_tol = 1e-9 * scale;
    const auto tight = static_cast<std::size_t>(std::count_if(
        first.reduced.begin(), first.reduced.end(), [&](double r) { return r <= tight_tol; }));
    Action best = from_assignment(first.row_to_col);
    if (tight == rows_) {
        // Only the matching's own edges are tight: the minimizer is unique.
        return best;
    }

    // Possible ties: fix components in index order, excluding each one
    // whenever an equally cheap matching survives without it.
    double best_value = dot(best, costs);
    const double big = (2.0 * static_cast<double>(rows_) + 1.0) * (scale + 1.0);
    std::vector<std::size_t> forced_col(rows_, cols_);  // cols_ = not forced
    std::vector<char> col_taken(cols_, 0);
    std::vector<char> excluded(dim(), 0);

    auto solve_constrained = [&]() -> std::optional<Action> {
        std::vector<std::size_t> free_rows, free_cols;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (forced_col[r] == cols_) free_rows.push_back(r);
        }
        for (std::size_t c = 0; c < cols_; ++c) {
            if (!col_taken[c]) free_cols.push_back(c);
        }
        Action a(dim());
        for (std::size_t r = 0; r < rows_; ++r) {
            if (forced_col[r] != cols_) a.set(r * cols_ + forced_col[r]);
        }
        if (free_rows.empty()) return a;
        if (free_cols.size() < free_rows.size()) return std::nullopt;
        std::vector<double> sub(free_rows.size() * free_cols.size());
        for (std::size_t i = 0; i < free_rows.size(); ++i) {
            for (std::size_t j = 0; j < free_cols.size(); ++j) {
                const std::size_t comp = free_rows[i] * cols_ + free_cols[j];
                sub[i * free_cols.size() + j] = excluded[comp] ? big : costs[comp];
            }
        }
        const auto res = solve_assignment(sub, free_rows.size(), free_cols.size());
        for (std::size_t i = 0; i < free_rows.size(); ++i) {
            const std::size_t comp = free_rows[i] * cols_ + free_cols[res.row_to_col[i]];
            if (excluded[comp]) return std::nullopt;
            a.set(comp);
        }
        return a;
    };

    for (std::size_t comp = 0; comp < dim(); ++comp) {
        const std::size_t r = comp / cols_;
        const std::size_t c = comp % cols_;
        if (forced_col[r] != cols_ || col_taken[c]) continue;
        excluded[comp] = 1;
        const auto candidate = solve_constrained();
        if (candidate && dot(*candidate, costs) <= best_value) {
            best_value = std::min(best_value, dot(*candidate, costs));
            best = *candidate;
            continue;
        }
        excluded[comp] = 0;
        forced_col[r] = c;
        col_taken[c] = 1;
    }
    const auto result = solve_constrained();
    return result ? *result : best;
}

std::vector<Action> BipartiteMatching::enumerate_unchecked() const {
    std::vector<Action> out;
    std::vector<std::size_t> assign(rows_);
    std::vector<char> used(cols_, 0);
    auto rec = [&](auto&& self, std::size_t r) -> void {
        if (r == rows_) {
            out.push_back(from_assignment(assign));
            return;
        }
        for (std::size_t c = 0; c < cols_; ++c) {
            if (used[c]) continue;
            used[c] = 1;
            assign[r] = c;
            self(self, r + 1);
            used[c] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

bool BipartiteMatching::is_member(const Action& a) const {
    std::vector<std::size_t> col_count(cols_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::size_t in_row = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (a[r * cols_ + c]) {
                ++in_row;
                ++col_count[c];
            }
        }
        if (in_row != 1) return false;
    }
    return std::all_of(col_count.begin(), col_count.end(), [](std::size_t n) { return n <= 1; });
}

// --- DAG paths -------------------------------------------------------------

DagPaths::Layout DagPaths::analyse(std::size_t nodes, const std::vector<DagEdge>& edges,
                                   std::size_t source, std::size_t sink) {
    if (nodes < 2 || source >= nodes || sink >= nodes || source == sink) {
        throw ConfigError("dagpath needs at least two nodes and distinct source/sink in range");
    }
    std::vector<std::vector<std::size_t>> out(nodes), in(nodes);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto [u, v] = edges[e];
        if (u >= nodes || v >= nodes || u == v) {
            throw ConfigError("dagpath edge " + std::to_string(e) + " is invalid");
        }
        out[u].push_back(e);
        in[v].push_back(e);
    }

    // Kahn's algorithm; leftover nodes mean a cycle.
    std::vector<std::size_t> indeg(nodes, 0), topo;
    for (const auto& e : edges) ++indeg[e.to];
    std::queue<std::size_t> ready;
    for (std::size_t u = 0; u < nodes; ++u) {
        if (indeg[u] == 0) ready.push(u);
    }
    while (!ready.empty()) {
        const std::size_t u = ready.front();
        ready.pop();
        topo.push_back(u);
        for (std::size_t e : out[u]) {
            if (--indeg[edges[e].to] == 0) ready.push(edges[e].to);
        }
    }
    if (topo.size() != nodes) {
        throw ConfigError("dagpath graph contains a cycle");
    }

    std::vector<char> from_source(nodes, 0), to_sink(nodes, 0);
    from_source[source] = 1;
    for (std::size_t u : topo) {
        if (!from_source[u]) continue;
        for (std::size_t e : out[u]) from_source[edges[e].to] = 1;
    }
    to_sink[sink] = 1;
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        for (std::size_t e : out[*it]) {
            if (to_sink[edges[e].to]) to_sink[*it] = 1;
        }
    }
    if (!to_sink[source]) {
        throw ConfigError("dagpath has no path from source to sink");
    }

    Layout layout;
    layout.out.assign(nodes, {});
    for (std::size_t u : topo) {
        if (!(from_source[u] && to_sink[u])) continue;
        layout.topo.push_back(u);
        if (u == sink) continue;  // paths end at the sink
        for (std::size_t e : out[u]) {
            const std::size_t v = edges[e].to;
            if (from_source[v] && to_sink[v]) layout.out[u].push_back(e);
        }
    }

    layout.paths_to_sink.assign(nodes, 0.0);
    std::vector<std::size_t> longest(nodes, 0);
    layout.paths_to_sink[sink] = 1.0;
    for (auto it = layout.topo.rbegin(); it != layout.topo.rend(); ++it) {
        const std::size_t u = *it;
        if (u == sink) continue;
        for (std::size_t e : layout.out[u]) {
            const std::size_t v = edges[e].to;
            layout.paths_to_sink[u] += layout.paths_to_sink[v];
            longest[u] = std::max(longest[u], longest[v] + 1);
        }
    }
    layout.longest = longest[source];
    return layout;
}

DagPaths::DagPaths(std::size_t nodes, std::vector<DagEdge> edges, std::size_t source,
                   std::size_t sink, std::size_t m)
    : DagPaths(nodes, edges, source, sink, m, analyse(nodes, edges, source, sink)) {}

DagPaths::DagPaths(std::size_t nodes, std::vector<DagEdge> edges, std::size_t source,
                   std::size_t sink, std::size_t m, Layout layout)
    : DecisionSet(edges.size(), m == 0 ? layout.longest : m),
      nodes_(nodes),
      edges_(std::move(edges)),
      source_(source),
      sink_(sink),
      layout_(std::move(layout)) {
    if (layout_.longest > max_weight()) {
        throw ConfigError("dagpath has a source-sink path with " + std::to_string(layout_.longest) +
                          " edges, more than m=" + std::to_string(max_weight()));
    }
}

std::string DagPaths::descriptor() const {
    std::string s = "dagpath:nodes=" + std::to_string(nodes_) + ";source=" +
                    std::to_string(source_) + ";sink=" + std::to_string(sink_) + ";m=" +
                    std::to_string(max_weight()) + ";edges=";
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        if (e) s += ' ';
        s += std::to_string(edges_[e].from) + ">" + std::to_string(edges_[e].to);
    }
    return s;
}

nlohmann::json DagPaths::to_json() const {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : edges_) edges.push_back({e.from, e.to});
    return {{"kind", "dagpath"}, {"nodes", nodes_}, {"edges", edges},
            {"source", source_}, {"sink", sink_},   {"m", max_weight()}};
}

double DagPaths::count_actions() const { return layout_.paths_to_sink[source_]; }

Action DagPaths::sample_uniform(Rng& rng) const {
    Action a(dim());
    std::size_t u = source_;
    while (u != sink_) {
        const double total = layout_.paths_to_sink[u];
        double x = rng.uniform() * total;
        std::size_t chosen = layout_.out[u].back();
        for (std::size_t e : layout_.out[u]) {
            x -= layout_.paths_to_sink[edges_[e].to];
            if (x < 0.0) {
                chosen = e;
                break;
            }
        }
        a.set(chosen);
        u = edges_[chosen].to;
    }
    return a;
}

Action DagPaths::minimize(std::span<const double> costs) const {
    // Backward DP over best suffixes. Prefix and suffix of a path share no
    // edge, so breaking suffix ties by incidence order yields the
    // lexicographically smallest optimal path.
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(nodes_, inf);
    std::vector<std::vector<std::size_t>> suffix(nodes_);
    best[sink_] = 0.0;
    for (auto it = layout_.topo.rbegin(); it != layout_.topo.rend(); ++it) {
        const std::size_t u = *it;
        if (u == sink_) continue;
        for (std::size_t e : layout_.out[u]) {
            const std::size_t v = edges_[e].to;
            const double value = costs[e] + best[v];
            std::vector<std::size_t> cand = suffix[v];
            cand.insert(std::lower_bound(cand.begin(), cand.end(), e), e);
            if (value < best[u] || (value == best[u] && lex_less_sorted(cand, suffix[u]))) {
                best[u] = value;
                suffix[u] = std::move(cand);
            }
        }
    }
    return Action::from_indices(dim(), suffix[source_]);
}

std::vector<Action> DagPaths::enumerate_unchecked() const {
    std::vector<Action> out;
    Action current(dim());
    auto rec = [&](auto&& self, std::size_t u) -> void {
        if (u == sink_) {
            out.push_back(current);
            return;
        }
        for (std::size_t e : layout_.out[u]) {
            current.set(e);
            self(self, edges_[e].to);
            current.set(e, false);
        }
    };
    rec(rec, source_);
    return out;
}

bool DagPaths::is_member(const Action& a) const {
    std::size_t u = source_;
    std::size_t walked = 0;
    while (u != sink_) {
        std::size_t next_edge = dim();
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            if (a[e] && edges_[e].from == u) {
                if (next_edge != dim()) return false;  // branching
                next_edge = e;
            }
        }
        if (next_edge == dim()) return false;
        ++walked;
        u = edges_[next_edge].to;
    }
    return walked == a.weight();
}

// --- free functions --------------------------------------------------------

std::pair<Action, double> best_fixed_action(const DecisionSet& set,
                                            std::span<const double> cumulative_loss) {
    for (double x : cumulative_loss) {
        if (x < 0.0) throw InputError("cumulative loss must be nonnegative");
    }
    Action a = set.linear_minimizer(cumulative_loss);
    const double value = dot(a, cumulative_loss);
    return {std::move(a), value};
}

std::shared_ptr<const DecisionSet> make_decision_set(const nlohmann::json& spec) {
    if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
        throw ConfigError("decision set must be an object with a string 'kind'");
    }
    const auto kind = spec.at("kind").get<std::string>();
    if (kind == "mab") {
        return std::make_shared<MultiArmedBandit>(json_size(spec, "d"));
    }
    if (kind == "mset") {
        return std::make_shared<MSet>(json_size(spec, "d"), json_size(spec, "m"));
    }
    if (kind == "matching") {
        if (spec.contains("n")) {
            return std::make_shared<BipartiteMatching>(json_size(spec, "n"));
        }
        return std::make_shared<BipartiteMatching>(json_size(spec, "rows"), json_size(spec, "cols"));
    }
    if (kind == "dagpath") {
        std::vector<DagEdge> edges;
        if (!spec.contains("edges") || !spec.at("edges").is_array()) {
            throw ConfigError("dagpath needs an 'edges' array of [from, to] pairs");
        }
        for (const auto& e : spec.at("edges")) {
            if (!e.is_array() || e.size() != 2) {
                throw ConfigError("dagpath edges must be [from, to] pairs");
            }
            edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
        }
        const std::size_t m = spec.contains("m") ? json_size(spec, "m") : 0;
        return std::make_shared<DagPaths>(json_size(spec, "nodes"), std::move(edges),
                                          json_size(spec, "source"), json_size(spec, "sink"), m);
    }
    throw ConfigError("unknown decision set kind '" + kind + "'");
}

std::shared_ptr<const DecisionSet> parse_set_descriptor(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    nlohmann::json spec;
    spec["kind"] = descriptor.substr(0, colon);
    if (colon != std::string::npos) {
        std::istringstream fields(descriptor.substr(colon + 1));
        std::string field;
        while (std::getline(fields, field, ';')) {
            const auto eq = field.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("malformed set descriptor field '" + field + "'");
            }
            const std::string key = field.substr(0, eq);
            const std::string value = field.substr(eq + 1);
            if (key == "edges") {
                nlohmann::json edges = nlohmann::json::array();
                std::istringstream list(value);
                std::string edge;
                while (list >> edge) {
                    const auto gt = edge.find('>');
                    if (gt == std::string::npos) {
                        throw ConfigError("malformed dagpath edge '" + edge + "'");
                    }
                    edges.push_back({std::stoull(edge.substr(0, gt)), std::stoull(edge.substr(gt + 1))});
                }
                spec["edges"] = edges;
            } else {
                try {
                    spec[key] = std::stoull(value);
                } catch (const std::exception&) {
                    throw ConfigError("set descriptor field '" + key + "' must be an integer");
                }
            }
        }
    }
    return make_decision_set(spec);
}

}  // namespace fpltrix
