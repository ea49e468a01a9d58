#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fpltrix/action.hpp"
#include "fpltrix/rng.hpp"

namespace fpltrix {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

enum class SetKind { mab, mset, matching, dagpath };

std::string to_string(SetKind kind);

// A combinatorial decision set S of {0,1}^d with ||v||_1 <= m for all v in S,
// accessed through a linear-minimization oracle. Instances are immutable once
// constructed and safe to share across threads.
class DecisionSet {
public:
    virtual ~DecisionSet() = default;

    std::size_t dim() const { return d_; }
    std::size_t max_weight() const { return m_; }

    virtual SetKind kind() const = 0;

    // Compact descriptor, e.g. "mset:d=10;m=3". Parsed by parse_set_descriptor.
    virtual std::string descriptor() const = 0;
    virtual nlohmann::json to_json() const = 0;

    // argmin_{v in S} v^T costs. Among minimizers the lexicographically
    // smallest incidence vector is returned. Costs may be negative.
    Action linear_minimizer(std::span<const double> costs) const;

    // Every member of S exactly once, in lexicographic order. Throws
    // NotEnumerableError when |S| exceeds `cap`.
    std::vector<Action> enumerate_actions(std::size_t cap = kDefaultEnumerationCap) const;

    // |S|, saturating at a large value for huge sets.
    virtual double count_actions() const = 0;

    bool contains(const Action& a) const;

    // Uniform draw from S.
    virtual Action sample_uniform(Rng& rng) const = 0;

protected:
    DecisionSet(std::size_t d, std::size_t m);

    virtual Action minimize(std::span<const double> costs) const = 0;
    virtual std::vector<Action> enumerate_unchecked() const = 0;
    virtual bool is_member(const Action& a) const = 0;

private:
    std::size_t d_;
    std::size_t m_;
};

// Unit vectors e_1..e_d (m = 1).
class MultiArmedBandit final : public DecisionSet {
public:
    explicit MultiArmedBandit(std::size_t d);

    SetKind kind() const override { return SetKind::mab; }
    std::string descriptor() const override;
    nlohmann::json to_json() const override;
    double count_actions() const override;
    Action sample_uniform(Rng& rng) const override;

protected:
    Action minimize(std::span<const double> costs) const override;
    std::vector<Action> enumerate_unchecked() const override;
    bool is_member(const Action& a) const override;
};

// All subsets of exactly m out of d components.
class MSet final : public DecisionSet {
public:
    MSet(std::size_t d, std::size_t m);

    SetKind kind() const override { return SetKind::mset; }
    std::string descriptor() const override;
    nlohmann::json to_json() const override;
    double count_actions() const override;
    Action sample_uniform(Rng& rng) const override;

protected:
    Action minimize(std::span<const double> costs) const override;
    std::vector<Action> enumerate_unchecked() const override;
    bool is_member(const Action& a) const override;
};

// Matchings of a rows x cols bipartite graph that saturate every row
// (perfect matchings when rows == cols). Component (r, c) has index
// r * cols + c, so d = rows * cols and m = rows.
class BipartiteMatching final : public DecisionSet {
public:
    explicit BipartiteMatching(std::size_t n) : BipartiteMatching(n, n) {}
    BipartiteMatching(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    SetKind kind() const override { return SetKind::matching; }
    std::string descriptor() const override;
    nlohmann::json to_json() const override;
    double count_actions() const override;
    Action sample_uniform(Rng& rng) const override;

protected:
    Action minimize(std::span<const double> costs) const override;
    std::vector<Action> enumerate_unchecked() const override;
    bool is_member(const Action& a) const override;

private:
    Action from_assignment(std::span<const std::size_t> row_to_col) const;

    std::size_t rows_;
    std::size_t cols_;
};

struct DagEdge {
    std::size_t from;
    std::size_t to;
};

// Source-to-sink paths of a DAG; component i is edge i. The constructor
// rejects cycles, instances without a source-sink path, and instances whose
// longest source-sink path has more than m edges. m defaults to that length.
class DagPaths final : public DecisionSet {
public:
    DagPaths(std::size_t nodes, std::vector<DagEdge> edges, std::size_t source, std::size_t sink,
             std::size_t m = 0);

    std::size_t nodes() const { return nodes_; }
    const std::vector<DagEdge>& edges() const { return edges_; }
    std::size_t source() const { return source_; }
    std::size_t sink() const { return sink_; }

    SetKind kind() const override { return SetKind::dagpath; }
    std::string descriptor() const override;
    nlohmann::json to_json() const override;
    double count_actions() const override;
    Action sample_uniform(Rng& rng) const override;

protected:
    Action minimize(std::span<const double> costs) const override;
    std::vector<Action> enumerate_unchecked() const override;
    bool is_member(const Action& a) const override;

private:
    struct Layout {
        std::vector<std::size_t> topo;              // topological order of useful nodes
        std::vector<std::vector<std::size_t>> out;  // useful out-edges per node
        std::vector<double> paths_to_sink;
        std::size_t longest = 0;
    };
    static Layout analyse(std::size_t nodes, const std::vector<DagEdge>& edges, std::size_t source,
                          std::size_t sink);

    DagPaths(std::size_t nodes, std::vector<DagEdge> edges, std::size_t source, std::size_t sink,
             std::size_t m, Layout layout);

    std::size_t nodes_;
    std::vector<DagEdge> edges_;
    std::size_t source_;
    std::size_t sink_;
    Layout layout_;
};

// argmin_{v in S} v^T L together with L* = v^T L.
std::pair<Action, double> best_fixed_action(const DecisionSet& set,
                                            std::span<const double> cumulative_loss);

// Builds a set from its JSON description, e.g.
// {"kind": "matching", "n": 4} or {"kind": "dagpath", "nodes": 4,
// "edges": [[0,1],[1,3]], "source": 0, "sink": 3}.
std::shared_ptr<const DecisionSet> make_decision_set(const nlohmann::json& spec);

// "mab:d=10", "mset:d=10;m=3", "matching:n=4", "matching:rows=2;cols=3",
// "dagpath:nodes=4;source=0;sink=3;edges=0>1 1>3 0>2 2>3[;m=2]"
std::shared_ptr<const DecisionSet> parse_set_descriptor(const std::string& descriptor);

}  // namespace fpltrix
