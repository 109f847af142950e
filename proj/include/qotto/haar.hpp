#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qotto/matrix.hpp"
#include "qotto/rng.hpp"

namespace qotto {

/// Two-level rotation acting on coordinates (i, j), i < j.
struct ElementaryRotationAngles {
    std::size_t i = 0;
    std::size_t j = 1;
    double phi = 0.0;  // [0, pi/2]
    double psi = 0.0;  // [0, 2*pi)
    double chi = 0.0;  // [0, 2*pi)
};

/// Identity outside the (i, j) block; the block is
///   [  cos(phi) e^{i psi}   sin(phi) e^{i chi} ]
///   [ -sin(phi) e^{-i chi}  cos(phi) e^{-i psi} ],
/// which is unitary for any angles.
inline UnitaryMatrix elementary_rotation(std::size_t dim, const ElementaryRotationAngles& a) {
    if (a.i >= a.j || a.j >= dim)
        throw std::invalid_argument("elementary_rotation: need i < j < dim, got (" +
                                    std::to_string(a.i) + ", " + std::to_string(a.j) + ") at dim " +
                                    std::to_string(dim));
    const double c = std::cos(a.phi), s = std::sin(a.phi);
    UnitaryMatrix u = ComplexMatrix::identity(dim);
    u(a.i, a.i) = c * cplx{std::cos(a.psi), std::sin(a.psi)};
    u(a.i, a.j) = s * cplx{std::cos(a.chi), std::sin(a.chi)};
    u(a.j, a.i) = -s * cplx{std::cos(a.chi), -std::sin(a.chi)};
    u(a.j, a.j) = c * cplx{std::cos(a.psi), -std::sin(a.psi)};
    return u;
}

/// Haar-distributed unitaries on U(L) via the Hurwitz parametrization:
/// nested composed rotations, each built from elementary two-level rotations
/// with phi = arcsin(xi^{1/(2m)}) (m the distance from the bottom of the
/// sub-block) and uniform phases. The composition order and angle draw order
/// below are fixed; they are part of the reproducibility contract and are
/// frozen by golden tests.
///
/// A sampler instance is a single-owner stateful stream. Independent child
/// streams come from the (seed, stream) pair, so trajectory-parallel
/// ensembles stay deterministic and order-independent.
class HaarSampler {
public:
    HaarSampler(std::size_t dim, std::uint64_t seed, std::uint64_t stream = 0)
        : dim_(dim), rng_(seed, stream) {
        if (dim < 2) throw std::invalid_argument("HaarSampler: dimension must be >= 2");
    }

    std::size_t dim() const { return dim_; }

    UnitaryMatrix sample() {
        const std::size_t n = dim_;
        UnitaryMatrix u = ComplexMatrix::identity(n);

        // innermost U(1) factor on the last coordinate
        const double omega = two_pi_ * rng_.uniform();
        u(n - 1, n - 1) = cplx{std::cos(omega), std::sin(omega)};

        // blocks of size r acting on the trailing r coordinates
        for (std::size_t r = 2; r <= n; ++r) {
            const std::size_t off = n - r;
            const double chi = two_pi_ * rng_.uniform();
            for (std::size_t k = 1; k < r; ++k) {
                const double psi = two_pi_ * rng_.uniform();
                const double xi = rng_.uniform();
                const double m = static_cast<double>(r - k);
                const double phi = std::asin(std::pow(xi, 1.0 / (2.0 * m)));
                apply_rotation_rows(u, off + k - 1, off + k, phi, psi, k == 1 ? chi : 0.0);
            }
        }
        return u;
    }

private:
    // u <- E^{(i,j)}(phi, psi, chi) * u, touching only rows i and j
    static void apply_rotation_rows(UnitaryMatrix& u, std::size_t i, std::size_t j, double phi,
                                    double psi, double chi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const cplx eip{std::cos(psi), std::sin(psi)};
        const cplx eic{std::cos(chi), std::sin(chi)};
        const cplx a = c * eip, b = s * eic;
        const cplx d = -s * std::conj(eic), e = c * std::conj(eip);
        for (std::size_t col = 0; col < u.cols(); ++col) {
            const cplx ri = u(i, col), rj = u(j, col);
            u(i, col) = a * ri + b * rj;
            u(j, col) = d * ri + e * rj;
        }
    }

    static constexpr double two_pi_ = 6.283185307179586476925286766559005768;

    std::size_t dim_;
    Philox4x32 rng_;
};

/// Independent cross-check sampler: QR of a complex Ginibre matrix, with the
/// R diagonal kept real positive (the convention under which Q is Haar).
/// Used to validate the Hurwitz sampler's moment statistics.
class GinibreQrSampler {
public:
    GinibreQrSampler(std::size_t dim, std::uint64_t seed, std::uint64_t stream = 0)
        : dim_(dim), rng_(seed, stream) {
        if (dim < 2) throw std::invalid_argument("GinibreQrSampler: dimension must be >= 2");
    }

    std::size_t dim() const { return dim_; }

    UnitaryMatrix sample() {
        const std::size_t n = dim_;
        ComplexMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx{rng_.normal(), rng_.normal()};

        // modified Gram-Schmidt with one reorthogonalization pass
        UnitaryMatrix q(n, n);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<cplx> v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = a(i, j);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < j; ++k) {
                    cplx proj{0.0, 0.0};
                    for (std::size_t i = 0; i < n; ++i) proj += std::conj(q(i, k)) * v[i];
                    for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q(i, k);
                }
            }
            double norm = 0.0;
            for (const auto& vi : v) norm += std::norm(vi);
            norm = std::sqrt(norm);  // R_jj > 0 by construction
            for (std::size_t i = 0; i < n; ++i) q(i, j) = v[i] / norm;
        }
        return q;
    }

private:
    std::size_t dim_;
    Philox4x32 rng_;
};

}  // namespace qotto
