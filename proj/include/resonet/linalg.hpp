#pragma once

// Small dense helpers for the cofactor (Cramer's rule) route. Kept separate
// from Eigen's LU so the two S-parameter paths share no factorization code.

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace resonet::linalg {

/// Determinant by Gaussian elimination with partial pivoting. The 0x0
/// determinant is 1.
template <typename Scalar>
[[nodiscard]] Scalar determinant(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a) {
    const Eigen::Index n = a.rows();
    Scalar det(1);
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        double best = std::abs(a(col, col));
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const double v = std::abs(a(r, col));
            if (v > best) {
                best = v;
                pivot = r;
            }
        }
        if (best == 0.0) return Scalar(0);
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            det = -det;
        }
        const Scalar p = a(col, col);
        det *= p;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            const Scalar f = a(r, col) / p;
            if (f == Scalar(0)) continue;
            for (Eigen::Index c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

/// The matrix with one row and one column removed.
template <typename Derived>
[[nodiscard]] auto minor_matrix(const Eigen::MatrixBase<Derived>& a, Eigen::Index row,
                                Eigen::Index col) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Index n = a.rows();
    const Eigen::Index m = a.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(n - 1, m - 1);
    for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
        if (r == row) continue;
        for (Eigen::Index c = 0, cc = 0; c < m; ++c) {
            if (c == col) continue;
            out(rr, cc++) = a(r, c);
        }
        ++rr;
    }
    return out;
}

template <typename Derived>
[[nodiscard]] typename Derived::Scalar cofactor(const Eigen::MatrixBase<Derived>& a,
                                                Eigen::Index row, Eigen::Index col) {
    const auto d = determinant(minor_matrix(a, row, col));
    return ((row + col) % 2 == 0) ? d : -d;
}

/// Product of row 2-norms; bounds |det| from above (Hadamard).
template <typename Derived>
[[nodiscard]] double hadamard_bound(const Eigen::MatrixBase<Derived>& a) {
    double bound = 1.0;
    for (Eigen::Index r = 0; r < a.rows(); ++r) bound *= a.row(r).norm();
    return bound;
}

} // namespace resonet::linalg
