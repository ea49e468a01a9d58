#include "fpltrix/action.hpp"

#include <cmath>
#include <string>

#include "fpltrix/errors.hpp"

namespace fpltrix {

Action::Action(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) {
            throw InputError("action entries must be 0 or 1");
        }
    }
}

Action Action::from_indices(std::size_t d, std::span<const std::size_t> indices) {
    Action a(d);
    for (std::size_t i : indices) {
        if (i >= d) {
            throw ConfigError("action index " + std::to_string(i) + " out of range for d=" +
                              std::to_string(d));
        }
        a.set(i);
    }
    return a;
}

Action Action::from_string(const std::string& bits) {
    Action a(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            a.set(i);
        } else if (bits[i] != '0') {
            throw InputError("action string must contain only 0 and 1: '" + bits + "'");
        }
    }
    return a;
}

std::size_t Action::weight() const {
    std::size_t w = 0;
    for (auto b : bits_) w += b;
    return w;
}

std::vector<std::size_t> Action::support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s.push_back(i);
    }
    return s;
}

std::string Action::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) s[i] = '1';
    }
    return s;
}

double dot(const Action& a, std::span<const double> costs) {
    if (a.size() != costs.size()) {
        throw ConfigError("dimension mismatch: action has " + std::to_string(a.size()) +
                          " components, vector has " + std::to_string(costs.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < costs.size(); ++i) {
        if (a[i]) total += costs[i];
    }
    return total;
}

LossVector::LossVector(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        if (!(v >= 0.0 && v <= 1.0)) {
            throw InputError("loss component " + std::to_string(i) + " = " + std::to_string(v) +
                             " is outside [0,1]");
        }
    }
}

Feedback Feedback::observe(const LossVector& losses, const Action& played) {
    if (losses.size() != played.size()) {
        throw ConfigError("loss vector and action dimensions differ");
    }
    std::vector<std::optional<double>> values(losses.size());
    for (std::size_t i = 0; i < losses.size(); ++i) {
        if (played[i]) values[i] = losses[i];
    }
    return Feedback(std::move(values));
}

void Feedback::check_matches(const Action& played) const {
    if (played.size() != values_.size()) {
        throw ProtocolError("feedback has " + std::to_string(values_.size()) +
                            " components, action has " + std::to_string(played.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (played[i] != values_[i].has_value()) {
            throw ProtocolError("feedback support differs from the played action at component " +
                                std::to_string(i));
        }
        if (values_[i] && !(*values_[i] >= 0.0 && *values_[i] <= 1.0)) {
            throw InputError("observed loss at component " + std::to_string(i) +
                             " is outside [0,1]");
        }
    }
}

}  // namespace fpltrix
