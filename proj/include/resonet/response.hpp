#pragma once

// S-parameters of a coupling-matrix model, frequency sweeps and passband
// metrics.
//
//   S11 = 1 - (2/qe1) [A]^-1_11
//   S21 = 2/sqrt(qe1 qen) [A]^-1_n1
//
// The + sign on S11 makes an uncoupled resonator a short (S11 = -1).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "resonet/coupling_matrix.hpp"
#include "resonet/error.hpp"
#include "resonet/linalg.hpp"
#include "resonet/prototype.hpp"

namespace resonet {

struct SParameters {
    cplx s11;
    cplx s21; ///< from [A]^-1_(n,1)
    cplx s12; ///< from [A]^-1_(1,n)
    cplx s22;
};

namespace detail {

inline constexpr double singular_rcond = 64.0 * std::numeric_limits<double>::epsilon();
inline constexpr double singular_det_ratio = 1e-14;

[[nodiscard]] inline std::string describe(cplx s) {
    return "s = " + std::to_string(s.real()) + (s.imag() < 0 ? " - j" : " + j") +
           std::to_string(std::abs(s.imag()));
}

[[nodiscard]] inline SParameters from_inverse_entries(const CouplingMatrix& cm, cplx inv11,
                                                      cplx inv_n1, cplx inv_1n, cplx inv_nn) {
    const double t = 2.0 / std::sqrt(cm.qe1() * cm.qen());
    return {1.0 - (2.0 / cm.qe1()) * inv11, t * inv_n1, t * inv_1n,
            1.0 - (2.0 / cm.qen()) * inv_nn};
}

} // namespace detail

/// Matrix-inverse route: dense LU with partial pivoting.
[[nodiscard]] inline SParameters s_parameters(const CouplingMatrix& cm, cplx s) {
    const int n = cm.order();
    const SystemMatrix a = assemble_A(cm, s);
    const Eigen::PartialPivLU<ComplexMatrix> lu(a);
    // Eigen's rcond estimate can miss an exactly zero pivot, so the smallest
    // pivot is checked against the matrix scale as well.
    const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
    const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    const double rc = lu.rcond();
    if (!(rc > detail::singular_rcond) || !(min_pivot > detail::singular_rcond * scale))
        fail(errc::singular_frequency,
             "system matrix is numerically singular at " + detail::describe(s));

    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd en = Eigen::VectorXcd::Zero(n);
    e1(0) = 1.0;
    en(n - 1) = 1.0;
    const Eigen::VectorXcd col1 = lu.solve(e1);
    const Eigen::VectorXcd coln = lu.solve(en);
    return detail::from_inverse_entries(cm, col1(0), col1(n - 1), coln(0), coln(n - 1));
}

/// Cramer's-rule route: [A]^-1 = adj(A)/Δ, with the cofactors formed
/// explicitly from minors.
[[nodiscard]] inline SParameters s_parameters_cramer(const CouplingMatrix& cm, cplx s) {
    const int n = cm.order();
    const SystemMatrix a = assemble_A(cm, s);
    const cplx delta = linalg::determinant(a);
    if (!(std::abs(delta) > detail::singular_det_ratio * linalg::hadamard_bound(a)))
        fail(errc::singular_frequency, "det[A] vanishes at " + detail::describe(s));

    if (n == 1) return detail::from_inverse_entries(cm, 1.0 / delta, 1.0 / delta, 1.0 / delta,
                                                    1.0 / delta);
    // adj(A)_(i,j) = cof_(j,i)
    const cplx cof11 = linalg::cofactor(a, 0, 0);
    const cplx cof1n = linalg::cofactor(a, 0, n - 1);
    const cplx cofn1 = linalg::cofactor(a, n - 1, 0);
    const cplx cofnn = linalg::cofactor(a, n - 1, n - 1);
    return detail::from_inverse_entries(cm, cof11 / delta, cof1n / delta, cofn1 / delta,
                                        cofnn / delta);
}

/// Narrowband low-pass to bandpass mapping Ω = (f/f0 - f0/f) / FBW.
[[nodiscard]] inline double prototype_frequency(const FilterSpec& spec, double f) {
    return (f / spec.f0 - spec.f0 / f) / spec.fbw();
}

/// Bandpass frequency that maps to prototype frequency Ω.
[[nodiscard]] inline double bandpass_frequency(const FilterSpec& spec, double omega) {
    const double x = spec.fbw() * omega;
    return spec.f0 * (x / 2.0 + std::sqrt(1.0 + x * x / 4.0));
}

/// Frequencies f- and f+ that map to Ω = -1 and Ω = +1.
[[nodiscard]] inline std::pair<double, double> band_edges(const FilterSpec& spec) {
    return {bandpass_frequency(spec, -1.0), bandpass_frequency(spec, 1.0)};
}

enum class FrequencyDomain {
    bandpass_hz,    ///< grid holds physical frequencies in Hz
    prototype_omega ///< grid holds normalized Ω
};

struct FrequencyResponse {
    std::vector<double> grid;
    std::vector<cplx> s11;
    std::vector<cplx> s21;
    std::vector<cplx> s22; ///< optional; empty when the source only carries S11/S21
    FrequencyDomain domain = FrequencyDomain::bandpass_hz;
    std::optional<FilterSpec> spec;

    [[nodiscard]] std::size_t size() const noexcept { return grid.size(); }

    void validate() const {
        if (s11.size() != grid.size() || s21.size() != grid.size() ||
            (!s22.empty() && s22.size() != grid.size()))
            fail(errc::invalid_specification, "response sequences differ in length");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1]))
                fail(errc::invalid_specification, "response grid is not strictly increasing");
    }

    /// Largest |S11| or |S21| on the grid.
    [[nodiscard]] double max_magnitude() const {
        double m = 0.0;
        for (std::size_t i = 0; i < size(); ++i)
            m = std::max({m, std::abs(s11[i]), std::abs(s21[i])});
        return m;
    }
};

/// Evaluates the model at s = jΩ(f) on a uniform grid of `points` frequencies.
[[nodiscard]] inline FrequencyResponse sweep(const CouplingMatrix& cm, const FilterSpec& spec,
                                             double f_start, double f_stop, int points) {
    spec.validate();
    if (!(f_start > 0.0) || !(f_stop > f_start) || !std::isfinite(f_stop))
        fail(errc::invalid_specification, "sweep requires 0 < f_start < f_stop");
    if (points < 2) fail(errc::invalid_specification, "sweep requires at least 2 points");

    FrequencyResponse r;
    r.domain = FrequencyDomain::bandpass_hz;
    r.spec = spec;
    const auto count = static_cast<std::size_t>(points);
    r.grid.resize(count);
    r.s11.resize(count);
    r.s21.resize(count);
    r.s22.resize(count);
    const double step = (f_stop - f_start) / (points - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = (i + 1 == count) ? f_stop : f_start + static_cast<double>(i) * step;
        const SParameters sp = s_parameters(cm, cplx(0.0, prototype_frequency(spec, f)));
        r.grid[i] = f;
        r.s11[i] = sp.s11;
        r.s21[i] = sp.s21;
        r.s22[i] = sp.s22;
    }
    return r;
}

/// Sweep directly in the prototype domain.
[[nodiscard]] inline FrequencyResponse sweep_prototype(const CouplingMatrix& cm, double omega_start,
                                                       double omega_stop, int points) {
    if (!(omega_stop > omega_start) || points < 2)
        fail(errc::invalid_specification, "invalid prototype sweep grid");
    FrequencyResponse r;
    r.domain = FrequencyDomain::prototype_omega;
    const double step = (omega_stop - omega_start) / (points - 1);
    for (int i = 0; i < points; ++i) {
        const double w = (i + 1 == points) ? omega_stop : omega_start + i * step;
        const SParameters sp = s_parameters(cm, cplx(0.0, w));
        r.grid.push_back(w);
        r.s11.push_back(sp.s11);
        r.s21.push_back(sp.s21);
        r.s22.push_back(sp.s22);
    }
    return r;
}

struct ResponseMetrics {
    double f_center = 0.0;
    double bandwidth_at_level = 0.0;
    double max_inband_s11_db = 0.0;
    int reflection_zero_count = 0;
};

[[nodiscard]] inline double to_db(double magnitude) {
    return 20.0 * std::log10(std::max(magnitude, 1e-300));
}

/// Finds the passband as the contiguous run of grid points where |S11| is
/// below `level_db`, and reports its center, width (edges interpolated in dB),
/// worst in-band reflection and the number of reflection zeros. A reflection
/// zero is a strict local minimum of |S11| at or below `zero_floor_db`.
///
/// When several runs exist, the one containing the design center (if a spec
/// is attached) or else the widest run is used. In-band means |Ω| <= 1 when
/// the mapping is known, otherwise the detected run.
[[nodiscard]] inline ResponseMetrics analyze_response(const FrequencyResponse& resp,
                                                      double level_db,
                                                      double zero_floor_db = -40.0) {
    if (resp.size() == 0) fail(errc::invalid_specification, "response is empty");
    if (!(level_db < 0.0)) fail(errc::invalid_specification, "threshold level must be negative");
    resp.validate();

    const std::size_t n = resp.size();
    std::vector<double> db(n);
    for (std::size_t i = 0; i < n; ++i) db[i] = to_db(std::abs(resp.s11[i]));

    std::vector<std::pair<std::size_t, std::size_t>> runs; // [first, last]
    for (std::size_t i = 0; i < n;) {
        if (db[i] < level_db) {
            std::size_t j = i;
            while (j + 1 < n && db[j + 1] < level_db) ++j;
            runs.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (runs.empty())
        fail(errc::no_passband,
             "no grid point has |S11| below " + std::to_string(level_db) + " dB");

    const bool mapped = resp.domain == FrequencyDomain::prototype_omega || resp.spec.has_value();
    const auto omega_at = [&](double x) {
        return resp.domain == FrequencyDomain::prototype_omega ? x
                                                               : prototype_frequency(*resp.spec, x);
    };

    auto chosen = runs.front();
    const auto width = [&](const auto& r) { return resp.grid[r.second] - resp.grid[r.first]; };
    bool picked = false;
    if (mapped) {
        const double center = resp.domain == FrequencyDomain::prototype_omega ? 0.0 : resp.spec->f0;
        for (const auto& r : runs)
            if (resp.grid[r.first] <= center && center <= resp.grid[r.second]) {
                chosen = r;
                picked = true;
                break;
            }
    }
    if (!picked)
        for (const auto& r : runs)
            if (width(r) > width(chosen)) chosen = r;

    const auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double d0 = db[inside];
        const double d1 = db[outside];
        const double t = (level_db - d0) / (d1 - d0);
        return resp.grid[inside] + t * (resp.grid[outside] - resp.grid[inside]);
    };
    const auto [first, last] = chosen;
    const double lo = first == 0 ? resp.grid.front() : crossing(first, first - 1);
    const double hi = last + 1 == n ? resp.grid.back() : crossing(last, last + 1);

    ResponseMetrics m;
    m.f_center = 0.5 * (lo + hi);
    m.bandwidth_at_level = hi - lo;

    double worst = -std::numeric_limits<double>::infinity();
    if (mapped)
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(omega_at(resp.grid[i])) <= 1.0) worst = std::max(worst, db[i]);
    if (!std::isfinite(worst))
        for (std::size_t i = first; i <= last; ++i) worst = std::max(worst, db[i]);
    m.max_inband_s11_db = worst;

    for (std::size_t i = std::max<std::size_t>(first, 1); i <= last && i + 1 < n; ++i)
        if (db[i] < db[i - 1] && db[i] < db[i + 1] && db[i] <= zero_floor_db)
            ++m.reflection_zero_count;
    return m;
}

} // namespace resonet
