#pragma once

// Chebyshev low-pass prototypes and the bandpass design targets derived from
// them (external quality factors and inter-resonator coupling coefficients).

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "resonet/error.hpp"

namespace resonet {

/// User-facing design intent for a bandpass filter.
struct FilterSpec {
    int order = 0;
    double f0 = 0.0;        ///< center frequency, Hz
    double bandwidth = 0.0; ///< absolute bandwidth, Hz
    double ripple_db = 0.0; ///< passband ripple L_AR, dB

    /// Fractional bandwidth.
    [[nodiscard]] double fbw() const noexcept { return bandwidth / f0; }

    void validate() const {
        auto bad = [](const std::string& msg) { fail(errc::invalid_specification, msg); };
        if (order < 2) bad("filter order must be at least 2, got " + std::to_string(order));
        if (!(f0 > 0.0) || !std::isfinite(f0)) bad("center frequency must be positive");
        if (!(bandwidth > 0.0) || !(bandwidth < f0))
            bad("bandwidth must satisfy 0 < bandwidth < f0");
        if (!(ripple_db > 0.0) || !std::isfinite(ripple_db))
            bad("passband ripple must be positive");
    }

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Element values g0..g(n+1) of a low-pass ladder prototype (cutoff Ω_c = 1).
struct LowpassPrototype {
    std::vector<double> g;

    [[nodiscard]] int order() const noexcept { return static_cast<int>(g.size()) - 2; }

    friend bool operator==(const LowpassPrototype&, const LowpassPrototype&) = default;
};

/// Bandpass realization targets: external Q at each port and the n-1
/// adjacent coupling coefficients of a ladder of synchronous resonators.
struct CouplingTargets {
    double q_ea = 0.0;
    double q_eb = 0.0;
    std::vector<double> k;

    friend bool operator==(const CouplingTargets&, const CouplingTargets&) = default;
};

/// Ripple constant ε with |S21|² = 1/(1 + ε²) at the band edge.
[[nodiscard]] inline double ripple_epsilon(double ripple_db) {
    return std::sqrt(std::pow(10.0, ripple_db / 10.0) - 1.0);
}

/// Chebyshev prototype element values from the closed-form recurrence
///   β = ln coth(L_AR / 17.37),  γ = sinh(β / 2n),
///   a_i = sin((2i-1)π / 2n),    b_i = γ² + sin²(iπ / n),
///   g1 = 2 a_1 / γ,             g_i = 4 a_{i-1} a_i / (b_{i-1} g_{i-1}),
/// and g(n+1) = 1 for odd n, coth²(β/4) for even n.
[[nodiscard]] inline LowpassPrototype chebyshev_g_values(int order, double ripple_db) {
    if (order < 1)
        fail(errc::invalid_specification, "prototype order must be at least 1");
    if (!(ripple_db > 0.0) || !std::isfinite(ripple_db))
        fail(errc::invalid_specification, "passband ripple must be positive");

    using std::numbers::pi;
    const double n = order;
    const double beta = std::log(1.0 / std::tanh(ripple_db / 17.37));
    const double gamma = std::sinh(beta / (2.0 * n));
    const auto a = [&](int i) { return std::sin((2.0 * i - 1.0) * pi / (2.0 * n)); };
    const auto b = [&](int i) {
        const double s = std::sin(i * pi / n);
        return gamma * gamma + s * s;
    };

    LowpassPrototype proto;
    proto.g.resize(static_cast<std::size_t>(order) + 2);
    proto.g[0] = 1.0;
    proto.g[1] = 2.0 * a(1) / gamma;
    for (int i = 2; i <= order; ++i)
        proto.g[i] = 4.0 * a(i - 1) * a(i) / (b(i - 1) * proto.g[i - 1]);
    if (order % 2 == 1) {
        proto.g[order + 1] = 1.0;
    } else {
        const double c = 1.0 / std::tanh(beta / 4.0);
        proto.g[order + 1] = c * c;
    }
    return proto;
}

/// Q_ea = g0 g1 / FBW, Q_eb = g_n g_(n+1) / FBW, k_i = FBW / sqrt(g_i g_(i+1)).
[[nodiscard]] inline CouplingTargets couplings_from_prototype(const LowpassPrototype& proto,
                                                              double fbw) {
    const int n = proto.order();
    if (n < 1) fail(errc::invalid_specification, "prototype has no elements");
    if (!(fbw > 0.0 && fbw < 1.0))
        fail(errc::invalid_specification, "fractional bandwidth must lie in (0, 1)");
    const auto& g = proto.g;
    CouplingTargets t;
    t.q_ea = g[0] * g[1] / fbw;
    t.q_eb = g[n] * g[n + 1] / fbw;
    t.k.reserve(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) t.k.push_back(fbw / std::sqrt(g[i] * g[i + 1]));
    return t;
}

[[nodiscard]] inline CouplingTargets spec_to_couplings(const FilterSpec& spec) {
    spec.validate();
    return couplings_from_prototype(chebyshev_g_values(spec.order, spec.ripple_db), spec.fbw());
}

} // namespace resonet
