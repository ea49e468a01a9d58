#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace fpltrix {

// Purpose tags keep the streams of one round independent of each other.
enum class StreamTag : std::uint64_t {
    perturbation = 1,
    estimation = 2,
    environment = 3,
    baseline = 4,
    audit = 5,
};

// Deterministic seed derivation: folds every component of `path` into `base`
// with the splitmix64 finalizer. derive_seed(s, {rep, t, tag}) gives each
// (replication, round, purpose) its own stream, so results do not depend on
// the order in which replications are executed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

class Rng {
public:
    using result_type = std::mt19937_64::result_type;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
        return Rng(derive_seed(base, path));
    }

    // Uniform on [0, 1) with 53 random bits; never returns 1.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::size_t below(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace fpltrix
