#pragma once

#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qotto/matrix.hpp"

namespace qotto {

// Structural tolerances: 1e-10 for state invariants, 1e-12 for algebraic
// round trips (double precision leaves ample headroom at these dimensions).
inline constexpr double kStateTol = 1e-10;
inline constexpr double kAlgebraTol = 1e-12;

// Computational basis is ordered (|up>, |down>) with sigma_z|up> = +|up>,
// so the ground state of H = (Delta/2) sigma_z with Delta > 0 is |down> = e1.
inline const ComplexMatrix& pauli_x() {
    static const ComplexMatrix m = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    return m;
}
inline const ComplexMatrix& pauli_y() {
    static const ComplexMatrix m =
        ComplexMatrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}});
    return m;
}
inline const ComplexMatrix& pauli_z() {
    static const ComplexMatrix m = ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}});
    return m;
}

/// (x, y, z) representation of a qubit state; r <= 1 up to tolerance.
struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double r() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Eigendecomposition result: values descending, matching eigenvector columns.
struct HermitianEigen {
    std::vector<double> values;
    ComplexMatrix vectors;  // column k is the eigenvector of values[k]
};

namespace detail {

// Cyclic complex Jacobi. Off the hot path: used for validation and for
// passive-state construction beyond dimension 2.
inline HermitianEigen jacobi_eigen(const ComplexMatrix& a_in) {
    const std::size_t n = a_in.rows();
    ComplexMatrix a = a_in;
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = std::max(a.max_abs(), 1.0);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-15 * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-18 * scale) continue;
                const cplx phase = apq / m;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * m);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx gpq = s * phase;         // G(p,q)
                const cplx gqp = -s * std::conj(phase);  // G(q,p)

                // A <- G^dag A G, columns first then rows
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp + gqp * akq;
                    a(k, q) = gpq * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(gqp) * aqk;
                    a(q, k) = std::conj(gpq) * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp + gqp * vkq;
                    v(k, q) = gpq * vkp + c * vkq;
                }
            }
        }
    }

    // sort descending; stable so degenerate values keep input basis order
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    HermitianEigen out;
    out.values.resize(n);
    out.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

}  // namespace detail

/// Hermitian, positive semidefinite, unit-trace state. Construction validates
/// the three invariants at tolerance 1e-10; `unchecked` skips them where the
/// caller guarantees validity by construction.
class DensityOperator {
public:
    static DensityOperator from_matrix(ComplexMatrix m) {
        if (!m.is_square() || m.rows() < 2)
            throw std::invalid_argument("DensityOperator: need a square matrix of dimension >= 2");
        if (!m.all_finite())
            throw std::invalid_argument("DensityOperator: non-finite entries");
        if (!m.is_hermitian(kStateTol))
            throw std::invalid_argument("DensityOperator: not Hermitian within 1e-10");
        if (std::abs(m.trace() - cplx{1.0, 0.0}) > kStateTol)
            throw std::invalid_argument("DensityOperator: trace differs from 1 by more than 1e-10");
        const auto eig = (m.rows() == 2) ? eigenvalues_2x2(m) : general_eigenvalues(m);
        for (double lambda : eig)
            if (lambda < -kStateTol)
                throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                            std::to_string(lambda));
        return DensityOperator(std::move(m));
    }

    static DensityOperator unchecked(ComplexMatrix m) { return DensityOperator(std::move(m)); }

    /// Pure state |b><b| in the computational basis of dimension d.
    static DensityOperator basis_state(std::size_t d, std::size_t b) {
        if (b >= d) throw std::invalid_argument("DensityOperator::basis_state: index out of range");
        ComplexMatrix m(d, d);
        m(b, b) = 1.0;
        return DensityOperator(std::move(m));
    }

    static DensityOperator maximally_mixed(std::size_t d) {
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0 / static_cast<double>(d);
        return DensityOperator(std::move(m));
    }

    const ComplexMatrix& mat() const { return mat_; }
    std::size_t dim() const { return mat_.rows(); }

    double purity() const { return (mat_ * mat_).trace().real(); }

private:
    explicit DensityOperator(ComplexMatrix m) : mat_(std::move(m)) {}

    static std::vector<double> eigenvalues_2x2(const ComplexMatrix& m) {
        const double a = m(0, 0).real(), c = m(1, 1).real();
        const double mid = 0.5 * (a + c);
        const double s = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(m(0, 1)));
        return {mid + s, mid - s};
    }
    static std::vector<double> general_eigenvalues(const ComplexMatrix& m) {
        return detail::jacobi_eigen(m).values;
    }

    ComplexMatrix mat_;
};

/// Analytic eigendecomposition of a 2x2 Hermitian matrix. Values descending;
/// for a degenerate (diagonal) input the basis order is kept as-is.
inline HermitianEigen eigen_hermitian_2x2(const DensityOperator& rho) {
    if (rho.dim() != 2)
        throw std::invalid_argument("eigen_hermitian_2x2: dimension must be 2");
    const ComplexMatrix& m = rho.mat();
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const cplx b = m(0, 1);

    HermitianEigen out;
    out.vectors = ComplexMatrix(2, 2);
    if (std::abs(b) == 0.0) {
        const bool swap = c > a;  // strict: equal values keep basis order
        out.values = swap ? std::vector<double>{c, a} : std::vector<double>{a, c};
        out.vectors(0, 0) = swap ? 0.0 : 1.0;
        out.vectors(1, 0) = swap ? 1.0 : 0.0;
        out.vectors(0, 1) = swap ? 1.0 : 0.0;
        out.vectors(1, 1) = swap ? 0.0 : 1.0;
        return out;
    }

    const double mid = 0.5 * (a + c);
    const double s = std::sqrt(0.25 * (a - c) * (a - c) + std::norm(b));
    const double lp = mid + s, lm = mid - s;
    out.values = {lp, lm};

    // (lp - c, conj(b)) and (b, lm - a) are exactly orthogonal eigenvectors
    const cplx vp0 = lp - c, vp1 = std::conj(b);
    const double np = std::sqrt(std::norm(vp0) + std::norm(vp1));
    const cplx vm0 = b, vm1 = lm - a;
    const double nm = std::sqrt(std::norm(vm0) + std::norm(vm1));
    out.vectors(0, 0) = vp0 / np;
    out.vectors(1, 0) = vp1 / np;
    out.vectors(0, 1) = vm0 / nm;
    out.vectors(1, 1) = vm1 / nm;
    return out;
}

/// Generic Hermitian eigendecomposition (values descending). Dimension-2
/// inputs take the analytic path.
inline HermitianEigen eigen_hermitian(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("eigen_hermitian: matrix not square");
    if (m.rows() == 2) return eigen_hermitian_2x2(DensityOperator::unchecked(m));
    return detail::jacobi_eigen(m);
}

inline BlochVector bloch_from_density(const DensityOperator& rho) {
    if (rho.dim() != 2)
        throw std::invalid_argument("bloch_from_density: dimension must be 2");
    const ComplexMatrix& m = rho.mat();
    BlochVector b;
    b.x = (m(0, 1) + m(1, 0)).real();
    b.y = (m(1, 0) - m(0, 1)).imag();
    b.z = (m(0, 0) - m(1, 1)).real();
    return b;
}

inline DensityOperator density_from_bloch(const BlochVector& b) {
    if (b.r() > 1.0 + kStateTol)
        throw std::invalid_argument("density_from_bloch: Bloch norm " + std::to_string(b.r()) +
                                    " exceeds 1");
    ComplexMatrix m(2, 2);
    m(0, 0) = 0.5 * (1.0 + b.z);
    m(1, 1) = 0.5 * (1.0 - b.z);
    m(0, 1) = 0.5 * cplx{b.x, -b.y};
    m(1, 0) = 0.5 * cplx{b.x, b.y};
    return DensityOperator::unchecked(std::move(m));
}

/// z-component shortcut used throughout the cycle bookkeeping.
inline double bloch_z(const DensityOperator& rho) {
    return (rho.mat()(0, 0) - rho.mat()(1, 1)).real();
}

}  // namespace qotto
