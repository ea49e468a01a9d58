#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

// Test-side oracles, written without the library's enumeration or solvers.
namespace oracle {

using Bits = std::vector<std::uint8_t>;

inline std::vector<Bits> all_mab(std::size_t d) {
    std::vector<Bits> out;
    for (std::size_t i = 0; i < d; ++i) {
        Bits b(d, 0);
        b[i] = 1;
        out.push_back(b);
    }
    return out;
}

inline std::vector<Bits> all_mset(std::size_t d, std::size_t m) {
    std::vector<Bits> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << d); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != m) continue;
        Bits b(d, 0);
        for (std::size_t i = 0; i < d; ++i) b[i] = (mask >> i) & 1u;
        out.push_back(b);
    }
    return out;
}

// Perfect matchings of an n x n grid, component r * n + c.
inline std::vector<Bits> all_matchings(std::size_t n) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Bits> out;
    do {
        Bits b(n * n, 0);
        for (std::size_t r = 0; r < n; ++r) b[r * n + perm[r]] = 1;
        out.push_back(b);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

inline double value(const Bits& b, const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (b[i]) s += c[i];
    }
    return s;
}

// Minimum value, and among exact minimizers the lexicographically smallest bits.
inline std::pair<Bits, double> brute_min(const std::vector<Bits>& actions,
                                         const std::vector<double>& c) {
    Bits best;
    double best_v = INFINITY;
    for (const auto& b : actions) {
        const double v = value(b, c);
        if (v < best_v || (v == best_v && b < best)) {
            best = b;
            best_v = v;
        }
    }
    return {best, best_v};
}

inline std::vector<double> signed_costs(std::mt19937_64& gen, std::size_t d) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> c(d);
    for (double& x : c) x = u(gen);
    return c;
}

// H_n = 1 + 1/2 + ... + 1/n
inline double harmonic(std::size_t n) {
    double h = 0.0;
    for (std::size_t k = 1; k <= n; ++k) h += 1.0 / static_cast<double>(k);
    return h;
}

// Composite Simpson rule on [a, b] with n (even) intervals.
template <class F>
double simpson(F f, double a, double b, std::size_t n = 20000) {
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k) s += f(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// q_i for the multi-armed bandit by direct integration in z:
//   int_0^B f_B(z) prod_{j != i} F_B(z + eta (L_j - L_i)) dz
inline double mab_q_simpson(const std::vector<double>& L, double eta, double B, std::size_t i) {
    const double mass = 1.0 - std::exp(-B);
    auto cdf = [&](double z) {
        if (z <= 0.0) return 0.0;
        if (z >= B) return 1.0;
        return (1.0 - std::exp(-z)) / mass;
    };
    auto f = [&](double z) {
        double p = std::exp(-z) / mass;
        for (std::size_t j = 0; j < L.size(); ++j) {
            if (j != i) p *= cdf(z + eta * (L[j] - L[i]));
        }
        return p;
    };
    // Split at the kinks so the rule sees smooth pieces.
    std::vector<double> knots{0.0, B};
    for (std::size_t j = 0; j < L.size(); ++j) {
        const double c = eta * (L[j] - L[i]);
        for (double k : {-c, B - c}) {
            if (k > 0.0 && k < B) knots.push_back(k);
        }
    }
    std::sort(knots.begin(), knots.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        const double len = knots[k + 1] - knots[k];
        if (len > 0.0) {
            const auto n = 2 * static_cast<std::size_t>(1000.0 * std::max(1.0, len));
            total += simpson(f, knots[k], knots[k + 1], n);
        }
    }
    return total;
}

}  // namespace oracle
