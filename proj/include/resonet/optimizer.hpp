#pragma once

// Coupling-matrix refinement by derivative-free minimization of a scalar
// cost. The cost places the n reflection zeros on the Chebyshev points
// Ω_i = cos((2i-1)π/2n) and pins |S11| at Ω = ±1 to the equiripple level.
//
// The search is a cyclic coordinate sweep: each free parameter in turn is
// stepped up or down, the step doubling after an accepted move and halving
// after a rejected one. An optional Nelder-Mead polish runs when the sweep
// stalls above tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "resonet/coupling_matrix.hpp"
#include "resonet/error.hpp"
#include "resonet/prototype.hpp"
#include "resonet/response.hpp"

namespace resonet {

struct CostConfig {
    std::vector<double> zero_omegas; ///< target reflection-zero frequencies Ω
    double edge_level = 0.0;         ///< target |S11| at Ω = ±1

    [[nodiscard]] static CostConfig chebyshev(int order, double ripple_db) {
        if (order < 1) fail(errc::invalid_specification, "cost needs order >= 1");
        CostConfig c;
        for (int i = 1; i <= order; ++i)
            c.zero_omegas.push_back(std::cos((2.0 * i - 1.0) * std::numbers::pi / (2.0 * order)));
        const double eps = ripple_epsilon(ripple_db);
        c.edge_level = eps / std::sqrt(1.0 + eps * eps);
        return c;
    }

    friend bool operator==(const CostConfig&, const CostConfig&) = default;
};

[[nodiscard]] inline double cost(const CouplingMatrix& cm, const CostConfig& config) {
    double c = 0.0;
    for (const double w : config.zero_omegas) c += std::norm(s_parameters(cm, cplx(0.0, w)).s11);
    for (const double edge : {1.0, -1.0}) {
        const double d = std::abs(s_parameters(cm, cplx(0.0, edge)).s11) - config.edge_level;
        c += d * d;
    }
    return c;
}

/// One optimizable slot: a coupling m_ij (moved together with m_ji) or one of
/// the two external quality factors.
struct FreeParameter {
    enum class Kind { coupling, qe1, qen };
    Kind kind = Kind::coupling;
    int row = 0;
    int col = 0;

    [[nodiscard]] static FreeParameter coupling(int i, int j) {
        return {Kind::coupling, std::min(i, j), std::max(i, j)};
    }
    [[nodiscard]] static FreeParameter input_q() { return {Kind::qe1, 0, 0}; }
    [[nodiscard]] static FreeParameter output_q() { return {Kind::qen, 0, 0}; }

    /// Image under the reversal i -> n-1-i.
    [[nodiscard]] FreeParameter mirrored(int n) const {
        switch (kind) {
        case Kind::qe1: return output_q();
        case Kind::qen: return input_q();
        default: return coupling(n - 1 - col, n - 1 - row);
        }
    }

    [[nodiscard]] double get(const CouplingMatrix& cm) const {
        switch (kind) {
        case Kind::qe1: return cm.qe1();
        case Kind::qen: return cm.qen();
        default: return cm.m(row, col);
        }
    }

    /// Returns false when the value is not admissible (non-positive Q).
    bool set(CouplingMatrix& cm, double value) const {
        switch (kind) {
        case Kind::qe1:
            if (!(value > 0.0)) return false;
            cm.set_qe1(value);
            return true;
        case Kind::qen:
            if (!(value > 0.0)) return false;
            cm.set_qen(value);
            return true;
        default: cm.set_m(row, col, value); return true;
        }
    }

    [[nodiscard]] std::string label() const {
        switch (kind) {
        case Kind::qe1: return "qe1";
        case Kind::qen: return "qen";
        default: return "m" + std::to_string(row + 1) + "," + std::to_string(col + 1);
        }
    }

    friend bool operator==(const FreeParameter&, const FreeParameter&) = default;
};

[[nodiscard]] inline std::vector<FreeParameter> ladder_couplings(int n) {
    std::vector<FreeParameter> out;
    for (int i = 0; i + 1 < n; ++i) out.push_back(FreeParameter::coupling(i, i + 1));
    return out;
}

[[nodiscard]] inline std::vector<FreeParameter> diagonal_entries(int n) {
    std::vector<FreeParameter> out;
    for (int i = 0; i < n; ++i) out.push_back(FreeParameter::coupling(i, i));
    return out;
}

struct OptimizationProblem {
    CouplingMatrix initial;
    FilterSpec spec;
    std::vector<FreeParameter> free_parameters;
    CostConfig cost_config;
    bool allow_cross_couplings = false;

    /// Problem whose cost targets the Chebyshev response of `spec`.
    [[nodiscard]] static OptimizationProblem for_spec(CouplingMatrix initial, const FilterSpec& spec,
                                                      std::vector<FreeParameter> free) {
        OptimizationProblem p{std::move(initial), spec, std::move(free),
                              CostConfig::chebyshev(spec.order, spec.ripple_db)};
        return p;
    }

    void validate() const {
        const int n = initial.order();
        if (n < 1) fail(errc::invalid_specification, "optimization needs an initial matrix");
        if (free_parameters.empty())
            fail(errc::invalid_specification, "no free parameters to optimize");
        for (const auto& p : free_parameters) {
            if (p.kind != FreeParameter::Kind::coupling) continue;
            if (p.row < 0 || p.col >= n)
                fail(errc::invalid_specification, "free parameter " + p.label() + " out of range");
            if (p.col - p.row > 1 && !allow_cross_couplings)
                fail(errc::invalid_specification,
                     "free parameter " + p.label() + " is a cross coupling (not enabled)");
        }
        if (cost_config.zero_omegas.empty())
            fail(errc::invalid_specification, "cost configuration has no target zeros");
    }
};

struct IterationRecord {
    int iteration = 0;
    double cost = 0.0;
    double max_step = 0.0;
};

struct OptimizerSettings {
    double initial_step_fraction = 0.05; ///< of each parameter's magnitude
    double zero_step = 0.01;             ///< for parameters starting at zero
    double step_floor = 1e-9;            ///< relative
    bool tie_mirrored = true;            ///< move mirror-image slots together on palindromic problems
    bool nelder_mead_fallback = false;
    std::function<void(const IterationRecord&)> on_iteration;
};

struct OptimizationResult {
    CouplingMatrix final;
    double initial_cost = 0.0;
    double final_cost = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> cost_history; ///< accepted cost after each sweep, starting with the initial cost
};

namespace detail {

[[nodiscard]] inline bool is_palindromic(const CouplingMatrix& cm, double tol = 1e-12) {
    const int n = cm.order();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(cm.m(i, j) - cm.m(n - 1 - j, n - 1 - i)) > tol) return false;
    return std::abs(cm.qe1() - cm.qen()) <= tol * std::max(1.0, cm.qe1());
}

/// Groups free parameters into coordinates. Mirror images share a
/// coordinate when tying is requested and the problem is palindromic.
[[nodiscard]] inline std::vector<std::vector<FreeParameter>> coordinates(
    const OptimizationProblem& problem, bool tie) {
    const int n = problem.initial.order();
    const auto& free = problem.free_parameters;
    bool closed = tie && is_palindromic(problem.initial);
    for (const auto& p : free)
        if (closed && std::find(free.begin(), free.end(), p.mirrored(n)) == free.end())
            closed = false;

    std::vector<std::vector<FreeParameter>> groups;
    for (const auto& p : free) {
        const bool seen = std::any_of(groups.begin(), groups.end(), [&](const auto& g) {
            return std::find(g.begin(), g.end(), p) != g.end();
        });
        if (seen) continue;
        std::vector<FreeParameter> g{p};
        if (closed && !(p.mirrored(n) == p)) g.push_back(p.mirrored(n));
        groups.push_back(std::move(g));
    }
    return groups;
}

class Objective {
public:
    Objective(const OptimizationProblem& problem, std::vector<std::vector<FreeParameter>> groups)
        : base_(problem.initial), config_(problem.cost_config), groups_(std::move(groups)) {}

    [[nodiscard]] std::vector<double> start() const {
        std::vector<double> x;
        for (const auto& g : groups_) x.push_back(g.front().get(base_));
        return x;
    }

    [[nodiscard]] std::optional<CouplingMatrix> apply(std::span<const double> x) const {
        CouplingMatrix cm = base_;
        for (std::size_t i = 0; i < groups_.size(); ++i)
            for (const auto& p : groups_[i])
                if (!p.set(cm, x[i])) return std::nullopt;
        return cm;
    }

    /// +inf for inadmissible points; throws on NaN.
    [[nodiscard]] double operator()(std::span<const double> x) const {
        const auto cm = apply(x);
        if (!cm) return std::numeric_limits<double>::infinity();
        double c;
        try {
            c = cost(*cm, config_);
        } catch (const error& e) {
            if (e.code() != errc::singular_frequency) throw;
            return std::numeric_limits<double>::infinity();
        }
        if (std::isnan(c)) fail(errc::numerical_failure, "cost evaluated to NaN");
        return c;
    }

private:
    CouplingMatrix base_;
    CostConfig config_;
    std::vector<std::vector<FreeParameter>> groups_;
};

/// Plain Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
inline void nelder_mead(const Objective& f, std::vector<double>& x, double& fx, int max_evals,
                        double tol, double scale) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> simplex{x};
    std::vector<double> values{fx};
    for (std::size_t i = 0; i < n; ++i) {
        auto v = x;
        v[i] += std::abs(v[i]) > 0.0 ? scale * std::abs(v[i]) : scale;
        values.push_back(f(v));
        simplex.push_back(std::move(v));
    }
    int evals = static_cast<int>(n);
    std::vector<std::size_t> order(n + 1);
    while (evals < max_evals) {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
        if (values[best] < tol || values[worst] - values[best] <= 1e-16 * std::abs(values[best]))
            break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != worst)
                for (std::size_t d = 0; d < n; ++d) centroid[d] += simplex[i][d] / n;
        const auto along = [&](double t) {
            std::vector<double> p(n);
            for (std::size_t d = 0; d < n; ++d)
                p[d] = centroid[d] + t * (simplex[worst][d] - centroid[d]);
            return p;
        };

        auto reflected = along(-1.0);
        const double fr = f(reflected);
        ++evals;
        if (fr < values[best]) {
            auto expanded = along(-2.0);
            const double fe = f(expanded);
            ++evals;
            if (fe < fr) {
                simplex[worst] = std::move(expanded);
                values[worst] = fe;
            } else {
                simplex[worst] = std::move(reflected);
                values[worst] = fr;
            }
        } else if (fr < values[second]) {
            simplex[worst] = std::move(reflected);
            values[worst] = fr;
        } else {
            auto contracted = along(fr < values[worst] ? -0.5 : 0.5);
            const double fc = f(contracted);
            ++evals;
            if (fc < std::min(fr, values[worst])) {
                simplex[worst] = std::move(contracted);
                values[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t d = 0; d < n; ++d)
                        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
                    values[i] = f(simplex[i]);
                    ++evals;
                }
            }
        }
    }
    const auto it = std::min_element(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(it - values.begin());
    if (*it < fx) {
        fx = *it;
        x = simplex[idx];
    }
}

} // namespace detail

[[nodiscard]] inline OptimizationResult optimize(const OptimizationProblem& problem, int max_iter,
                                                 double tol = 1e-10,
                                                 const OptimizerSettings& settings = {}) {
    problem.validate();
    if (max_iter < 1) fail(errc::invalid_specification, "max_iter must be at least 1");
    if (!(tol >= 0.0)) fail(errc::invalid_specification, "tolerance must be non-negative");

    const detail::Objective objective(problem, detail::coordinates(problem, settings.tie_mirrored));
    std::vector<double> x = objective.start();
    double fx = objective(x);
    if (!std::isfinite(fx))
        fail(errc::numerical_failure, "cost is not finite at the initial coupling matrix");

    OptimizationResult result;
    result.initial_cost = fx;
    result.cost_history.push_back(fx);

    std::vector<double> step(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        step[i] = x[i] != 0.0 ? settings.initial_step_fraction * std::abs(x[i]) : settings.zero_step;
    const auto floor_reached = [&] {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (step[i] >= settings.step_floor * std::max(1.0, std::abs(x[i]))) return false;
        return true;
    };

    bool converged = fx < tol;
    int it = 0;
    while (!converged && it < max_iter) {
        ++it;
        for (std::size_t i = 0; i < x.size(); ++i) {
            bool moved = false;
            for (const double dir : {1.0, -1.0}) {
                auto trial = x;
                trial[i] += dir * step[i];
                const double ft = objective(trial);
                if (ft < fx) {
                    x = std::move(trial);
                    fx = ft;
                    moved = true;
                    break;
                }
            }
            step[i] *= moved ? 2.0 : 0.5;
        }
        result.cost_history.push_back(fx);
        if (settings.on_iteration)
            settings.on_iteration({it, fx, *std::max_element(step.begin(), step.end())});
        converged = fx < tol || floor_reached();
    }

    if (!(fx < tol) && settings.nelder_mead_fallback) {
        detail::nelder_mead(objective, x, fx, 200 * static_cast<int>(x.size()) * max_iter, tol,
                            settings.initial_step_fraction);
        result.cost_history.push_back(fx);
        converged = converged || fx < tol;
    }

    result.final = *objective.apply(x);
    result.final_cost = fx;
    result.iterations = it;
    result.converged = converged;
    return result;
}

/// Scales each listed parameter by (1 ± fraction), the sign drawn from a
/// seeded generator. Mirror images are not kept in step.
[[nodiscard]] inline CouplingMatrix perturb(const CouplingMatrix& cm,
                                            std::span<const FreeParameter> params, double fraction,
                                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CouplingMatrix out = cm;
    for (const auto& p : params) {
        const double sign = (rng() >> 63) != 0 ? 1.0 : -1.0;
        if (!p.set(out, p.get(out) * (1.0 + sign * fraction)))
            fail(errc::invalid_specification, "perturbation makes " + p.label() + " inadmissible");
    }
    return out;
}

} // namespace resonet
