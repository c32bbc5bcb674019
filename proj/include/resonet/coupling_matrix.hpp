#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "resonet/error.hpp"
#include "resonet/prototype.hpp"

namespace resonet {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// [A](s) = [q] + s[I] - j[m]; complex-symmetric for every s.
using SystemMatrix = ComplexMatrix;

/// Normalized coupling matrix [m] together with the normalized external
/// quality factors of the first and last resonator. Indices are zero-based.
class CouplingMatrix {
public:
    CouplingMatrix() = default;

    CouplingMatrix(RealMatrix m, double qe1, double qen) : m_(std::move(m)) {
        if (m_.rows() < 1 || m_.rows() != m_.cols())
            fail(errc::invalid_specification, "coupling matrix must be square and non-empty");
        if (!m_.allFinite())
            fail(errc::invalid_specification, "coupling matrix has non-finite entries");
        for (Eigen::Index i = 0; i < m_.rows(); ++i)
            for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
                if (m_(i, j) != m_(j, i))
                    fail(errc::invalid_specification,
                         "coupling matrix is not symmetric at (" + std::to_string(i + 1) + "," +
                             std::to_string(j + 1) + ")");
        set_qe1(qe1);
        set_qen(qen);
    }

    [[nodiscard]] static CouplingMatrix zero(int n, double qe1, double qen) {
        return CouplingMatrix(RealMatrix::Zero(n, n), qe1, qen);
    }

    [[nodiscard]] int order() const noexcept { return static_cast<int>(m_.rows()); }
    [[nodiscard]] const RealMatrix& m() const noexcept { return m_; }
    [[nodiscard]] double m(int i, int j) const { return m_(i, j); }
    [[nodiscard]] double qe1() const noexcept { return qe1_; }
    [[nodiscard]] double qen() const noexcept { return qen_; }

    /// Writes m_ij and m_ji together.
    void set_m(int i, int j, double value) {
        m_(i, j) = value;
        m_(j, i) = value;
    }

    void set_qe1(double q) {
        if (!(q > 0.0) || !std::isfinite(q))
            fail(errc::invalid_specification, "input external quality factor must be positive");
        qe1_ = q;
    }

    void set_qen(double q) {
        if (!(q > 0.0) || !std::isfinite(q))
            fail(errc::invalid_specification, "output external quality factor must be positive");
        qen_ = q;
    }

    friend bool operator==(const CouplingMatrix& a, const CouplingMatrix& b) {
        return a.m_.rows() == b.m_.rows() && a.m_ == b.m_ && a.qe1_ == b.qe1_ && a.qen_ == b.qen_;
    }

private:
    RealMatrix m_;
    double qe1_ = 1.0;
    double qen_ = 1.0;
};

/// Ladder matrix from bandpass targets: m_(i,i+1) = k_i / FBW, qe = Q_e · FBW.
[[nodiscard]] inline CouplingMatrix from_couplings(const CouplingTargets& targets, double fbw) {
    if (!(fbw > 0.0 && fbw < 1.0))
        fail(errc::invalid_specification, "fractional bandwidth must lie in (0, 1)");
    const int n = static_cast<int>(targets.k.size()) + 1;
    CouplingMatrix cm = CouplingMatrix::zero(n, targets.q_ea * fbw, targets.q_eb * fbw);
    for (int i = 0; i + 1 < n; ++i) cm.set_m(i, i + 1, targets.k[i] / fbw);
    return cm;
}

[[nodiscard]] inline SystemMatrix assemble_A(const CouplingMatrix& cm, cplx s) {
    const int n = cm.order();
    SystemMatrix a = cplx(0.0, -1.0) * cm.m().cast<cplx>();
    a.diagonal().array() += s;
    a(0, 0) += 1.0 / cm.qe1();
    a(n - 1, n - 1) += 1.0 / cm.qen();
    return a;
}

/// [M] = j[m] - [q], so that [A](s) = s[I] - [M].
[[nodiscard]] inline ComplexMatrix effective_M(const CouplingMatrix& cm) {
    const int n = cm.order();
    ComplexMatrix mm = cplx(0.0, 1.0) * cm.m().cast<cplx>();
    mm(0, 0) -= 1.0 / cm.qe1();
    mm(n - 1, n - 1) -= 1.0 / cm.qen();
    return mm;
}

} // namespace resonet
