#pragma once

#include <stdexcept>
#include <string>

namespace fpltrix {

// Root of the library's exception hierarchy. kind() is a stable tag used in
// the CLI's structured error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Inconsistent dimensions or invalid experiment/instance configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// Malformed numeric input (non-finite costs, losses outside [0,1], ...).
struct InputError : Error {
    explicit InputError(const std::string& what) : Error("input", what) {}
};

// Invalid distribution/schedule parameter (B <= 0, beta >= 1, ...).
struct ParameterError : Error {
    explicit ParameterError(const std::string& what) : Error("parameter", what) {}
};

// Feedback that does not match the played action's support.
struct ProtocolError : Error {
    explicit ProtocolError(const std::string& what) : Error("protocol", what) {}
};

struct EstimatorStateError : Error {
    explicit EstimatorStateError(const std::string& what) : Error("estimator_state", what) {}
};

struct NotEnumerableError : Error {
    explicit NotEnumerableError(const std::string& what) : Error("not_enumerable", what) {}
};

struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& what) : Error("unsupported", what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace fpltrix
