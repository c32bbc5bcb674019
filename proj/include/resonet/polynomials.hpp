#pragma once

// Characteristic polynomials of a coupling-matrix filter,
//
//   S11 = F(s)/E(s),   S21 = P(s)/(ε E(s)),
//
// recovered by eigenvalue methods rather than polynomial arithmetic:
//   E: eigenvalues of [M] = j[m] - [q]
//   F: det A - (2/qe1) cof_11 A is det A with A_11 lowered by 2/qe1, i.e. the
//      eigenvalues of [M] with +2/qe1 added to M_11
//   P: finite generalized eigenvalues of det(s[I'] - [M']) = 0, where the
//      primed matrices drop the first row and last column.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "resonet/coupling_matrix.hpp"
#include "resonet/error.hpp"
#include "resonet/linalg.hpp"

namespace resonet {

/// Monic polynomial, coefficients in ascending degree.
struct PolynomialCoefficients {
    std::vector<cplx> coeffs;

    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }

    [[nodiscard]] cplx operator()(cplx s) const {
        cplx acc(0.0);
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * s + *it;
        return acc;
    }
};

/// Expands ∏(s - λ_i) through the elementary symmetric sums e_k of the
/// eigenvalues: the coefficient of s^(N-k) is (-1)^k e_k, ending with
/// (-1)^N ∏ λ_i.
[[nodiscard]] inline PolynomialCoefficients char_poly_from_eigenvalues(std::span<const cplx> eig) {
    if (eig.empty()) fail(errc::invalid_specification, "eigenvalue list is empty");
    const std::size_t n = eig.size();
    std::vector<cplx> e(n + 1, cplx(0.0));
    e[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k >= 1; --k) e[k] += eig[i] * e[k - 1];

    PolynomialCoefficients p;
    p.coeffs.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p.coeffs[n - k] = (k % 2 == 0 ? 1.0 : -1.0) * e[k];
    p.coeffs[n] = 1.0;
    return p;
}

struct CharacteristicPolynomials {
    std::vector<cplx> e_roots; ///< poles shared by S11 and S21
    std::vector<cplx> f_roots; ///< reflection zeros
    std::vector<cplx> p_roots; ///< finite transmission zeros
    double epsilon = 1.0;

    friend bool operator==(const CharacteristicPolynomials&,
                           const CharacteristicPolynomials&) = default;
};

namespace detail {

inline void sort_roots(std::vector<cplx>& roots) {
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
        return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real();
    });
}

[[nodiscard]] inline std::vector<cplx> eigenvalues(const ComplexMatrix& m, const char* what) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
    if (solver.info() != Eigen::Success)
        fail(errc::numerical_failure,
             std::string("eigenvalue solver failed for ") + what +
                 " (condition estimate " +
                 std::to_string(1.0 / Eigen::PartialPivLU<ComplexMatrix>(m).rcond()) + ")");
    std::vector<cplx> out(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + solver.eigenvalues().size());
    sort_roots(out);
    return out;
}

} // namespace detail

/// Finite roots of det(sB - A) = 0 together with the leading coefficient c of
/// that determinant, so det(sB - A) = c ∏(s - root).
struct GeneralizedRoots {
    std::vector<cplx> roots;
    cplx leading = 1.0;
};

/// Solves det(sB - A) = 0 for a possibly singular B. The polynomial degree d
/// (the number of finite roots) is read off samples of the determinant on a
/// circle; the roots themselves come from the shift-inverted standard problem
/// (A - σB)^-1 B, whose eigenvalues μ map to s = σ + 1/μ. The n - d smallest
/// |μ| belong to infinite roots and are discarded.
[[nodiscard]] inline GeneralizedRoots finite_generalized_eigenvalues(const ComplexMatrix& a,
                                                                     const ComplexMatrix& b) {
    using std::numbers::pi;
    const Eigen::Index k = a.rows();
    GeneralizedRoots out;
    if (k == 0) return out;

    const double radius = 1.0 + a.norm() / std::sqrt(static_cast<double>(k)) + b.norm();
    const Eigen::Index samples = k + 1;
    const double phase = 0.3;
    std::vector<cplx> values(static_cast<std::size_t>(samples));
    for (Eigen::Index j = 0; j < samples; ++j) {
        const cplx s = std::polar(radius, phase + 2.0 * pi * j / samples);
        values[j] = linalg::determinant(ComplexMatrix(s * b - a));
    }
    std::vector<cplx> coeff(static_cast<std::size_t>(samples));
    double largest = 0.0;
    for (Eigen::Index m = 0; m < samples; ++m) {
        cplx acc(0.0);
        for (Eigen::Index j = 0; j < samples; ++j)
            acc += values[j] * std::polar(1.0, -m * (phase + 2.0 * pi * j / samples));
        coeff[m] = acc / static_cast<double>(samples) / std::pow(radius, m);
        largest = std::max(largest, std::abs(coeff[m]) * std::pow(radius, m));
    }
    if (!(largest > 0.0) || !std::isfinite(largest))
        fail(errc::numerical_failure, "transmission determinant vanishes identically");

    Eigen::Index degree = 0;
    for (Eigen::Index m = 0; m < samples; ++m)
        if (std::abs(coeff[m]) * std::pow(radius, m) > 1e-10 * largest) degree = m;
    out.leading = coeff[degree];
    if (degree == 0) return out;

    double best_rcond = -1.0;
    cplx sigma(0.0);
    for (int t = 0; t < 8; ++t) {
        const cplx candidate = std::polar(0.5 * radius, 0.7 + 1.3 * t);
        const double rc = Eigen::PartialPivLU<ComplexMatrix>(a - candidate * b).rcond();
        if (rc > best_rcond) {
            best_rcond = rc;
            sigma = candidate;
        }
        if (rc > 1e-6) break;
    }
    const Eigen::PartialPivLU<ComplexMatrix> shifted(a - sigma * b);
    const ComplexMatrix c = shifted.solve(b);
    std::vector<cplx> mu = detail::eigenvalues(c, "the transmission-zero pencil");
    std::sort(mu.begin(), mu.end(), [](cplx x, cplx y) { return std::abs(x) > std::abs(y); });
    for (Eigen::Index i = 0; i < degree; ++i) out.roots.push_back(sigma + 1.0 / mu[i]);
    detail::sort_roots(out.roots);
    return out;
}

/// ε is fixed by S21 itself: P/ε = 2 cof_1N(A)/sqrt(qe1 qeN) with
/// cof_1N(A) = ±det(s[I'] - [M']) = ±c ∏(s - p_k) and P monic, so
/// ε = sqrt(qe1 qeN) / (2|c|).
[[nodiscard]] inline CharacteristicPolynomials extract_polynomials(const CouplingMatrix& cm) {
    const int n = cm.order();
    if (n < 2) fail(errc::invalid_specification, "polynomial extraction needs order >= 2");

    const ComplexMatrix mm = effective_M(cm);
    CharacteristicPolynomials cp;
    cp.e_roots = detail::eigenvalues(mm, "[M]");

    ComplexMatrix mf = mm;
    mf(0, 0) += 2.0 / cm.qe1();
    cp.f_roots = detail::eigenvalues(mf, "the reflection-zero matrix");

    const ComplexMatrix m_reduced = mm.block(1, 0, n - 1, n - 1);
    const ComplexMatrix i_reduced = ComplexMatrix::Identity(n, n).block(1, 0, n - 1, n - 1);
    const GeneralizedRoots p = finite_generalized_eigenvalues(m_reduced, i_reduced);
    cp.p_roots = p.roots;
    cp.epsilon = std::sqrt(cm.qe1() * cm.qen()) / (2.0 * std::abs(p.leading));
    return cp;
}

/// Magnitudes (|S11|, |S21|) from the root products.
[[nodiscard]] inline std::pair<double, double> response_from_polynomials(
    const CharacteristicPolynomials& cp, cplx s) {
    const double scale = 1.0 + std::abs(s);
    cplx e(1.0), f(1.0), p(1.0);
    for (const cplx r : cp.e_roots) {
        if (std::abs(s - r) <= 1e-14 * (scale + std::abs(r)))
            fail(errc::singular_frequency, "evaluation point coincides with a pole of E(s)");
        e *= s - r;
    }
    for (const cplx r : cp.f_roots) f *= s - r;
    for (const cplx r : cp.p_roots) p *= s - r;
    return {std::abs(f / e), std::abs(p / e) / cp.epsilon};
}

} // namespace resonet
