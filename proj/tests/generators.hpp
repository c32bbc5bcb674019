#pragma once

// Seeded random inputs for property tests.

#include <cstdint>
#include <random>

#include "resonet/coupling_matrix.hpp"
#include "resonet/prototype.hpp"

namespace gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    bool coin() { return integer(0, 1) == 1; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Lossless matrix with every entry populated (cross couplings and
/// detuning included) and external Q in [0.3, 3].
inline resonet::CouplingMatrix dense_matrix(Rng& rng, int n) {
    resonet::RealMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m(i, j) = m(j, i) = rng.uniform(-1.5, 1.5);
    return {m, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)};
}

/// Synchronous ladder: couplings on the superdiagonal only.
inline resonet::CouplingMatrix ladder_matrix(Rng& rng, int n) {
    resonet::RealMatrix m = resonet::RealMatrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = rng.uniform(0.2, 1.5);
    return {m, rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)};
}

inline resonet::FilterSpec spec(Rng& rng) {
    resonet::FilterSpec s;
    s.order = rng.integer(2, 9);
    s.f0 = rng.log_uniform(1e8, 1e12);
    s.bandwidth = s.f0 * rng.uniform(0.005, 0.3);
    s.ripple_db = rng.log_uniform(0.005, 2.0);
    return s;
}

} // namespace gen
