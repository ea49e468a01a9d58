#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpltrix {

// Binary incidence vector over the d components. Ordering is lexicographic on
// the bits, which is the tie-break order used by every linear oracle.
class Action {
public:
    Action() = default;
    explicit Action(std::size_t d) : bits_(d, 0) {}
    explicit Action(std::vector<std::uint8_t> bits);

    static Action from_indices(std::size_t d, std::span<const std::size_t> indices);
    // "0110" -> bits {0,1,1,0}
    static Action from_string(const std::string& bits);

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool on = true) { bits_[i] = on ? 1 : 0; }

    std::size_t weight() const;
    std::vector<std::size_t> support() const;
    std::span<const std::uint8_t> bits() const { return bits_; }
    std::string to_string() const;

    friend bool operator==(const Action&, const Action&) = default;
    friend std::strong_ordering operator<=>(const Action& a, const Action& b) {
        return a.bits_ <=> b.bits_;
    }

private:
    std::vector<std::uint8_t> bits_;
};

// v^T c, summed in index order. Every oracle reports values through this
// function so that values from different routes compare exactly.
double dot(const Action& a, std::span<const double> costs);

// A loss vector in [0,1]^d.
class LossVector {
public:
    LossVector() = default;
    explicit LossVector(std::vector<double> values);

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const { return values_; }

    friend bool operator==(const LossVector&, const LossVector&) = default;

private:
    std::vector<double> values_;
};

// Semi-bandit observation: components outside the played action's support are
// explicitly unobserved rather than zero.
class Feedback {
public:
    Feedback() = default;
    explicit Feedback(std::vector<std::optional<double>> values) : values_(std::move(values)) {}

    static Feedback observe(const LossVector& losses, const Action& played);

    std::size_t size() const { return values_.size(); }
    bool observed(std::size_t i) const { return values_[i].has_value(); }
    const std::optional<double>& operator[](std::size_t i) const { return values_[i]; }

    // Throws ProtocolError unless the observed set equals the action's support.
    void check_matches(const Action& played) const;

private:
    std::vector<std::optional<double>> values_;
};

}  // namespace fpltrix
