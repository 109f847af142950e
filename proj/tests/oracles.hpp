#pragma once

// Brute-force joint-space constructions used to cross-check the sequential
// channel implementations. Everything here works on the full
// system x hot x cold space of dimension 4 mu, with index
// ((s * mu + h) * 2 + c).

#include <cmath>
#include <cstddef>

#include "qotto/collision.hpp"
#include "qotto/density.hpp"
#include "qotto/ergotropy.hpp"
#include "qotto/matrix.hpp"

namespace oracles {

using qotto::ComplexMatrix;
using qotto::UnitaryMatrix;

inline std::size_t idx3(std::size_t s, std::size_t h, std::size_t c, std::size_t mu) {
    return (s * mu + h) * 2 + c;
}

/// Lift a unitary acting on system x hot to the full tripartite space.
inline UnitaryMatrix embed_hot_unitary(const UnitaryMatrix& r, std::size_t mu) {
    const std::size_t dim = 4 * mu;
    UnitaryMatrix m(dim, dim);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t h = 0; h < mu; ++h)
            for (std::size_t sp = 0; sp < 2; ++sp)
                for (std::size_t hp = 0; hp < mu; ++hp)
                    for (std::size_t c = 0; c < 2; ++c)
                        m(idx3(s, h, c, mu), idx3(sp, hp, c, mu)) = r(s * mu + h, sp * mu + hp);
    return m;
}

/// Lift the partial swap acting on system x cold to the full space.
inline UnitaryMatrix embed_partial_swap(double alpha, std::size_t mu) {
    const UnitaryMatrix p = qotto::partial_swap_unitary(alpha);
    const std::size_t dim = 4 * mu;
    UnitaryMatrix m(dim, dim);
    for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t sp = 0; sp < 2; ++sp)
                for (std::size_t cp = 0; cp < 2; ++cp)
                    for (std::size_t h = 0; h < mu; ++h)
                        m(idx3(s, h, c, mu), idx3(sp, h, cp, mu)) = p(s * 2 + c, sp * 2 + cp);
    return m;
}

/// The full cycle in one shot: build rho x chi x theta, apply the lifted hot
/// unitary then the lifted partial swap, trace out both reservoirs.
inline qotto::DensityOperator cycle_map_monolithic(const qotto::DensityOperator& rho,
                                                   const qotto::ReservoirSpec& spec,
                                                   const UnitaryMatrix& r) {
    const ComplexMatrix joint =
        qotto::kron(qotto::kron(rho.mat(), spec.hot_unit.mat()), spec.cold_unit.mat());
    const UnitaryMatrix r_emb = embed_hot_unitary(r, spec.mu);
    const UnitaryMatrix p_emb = embed_partial_swap(spec.alpha, spec.mu);
    const ComplexMatrix evolved =
        p_emb * (r_emb * joint * r_emb.adjoint()) * p_emb.adjoint();
    return qotto::DensityOperator::from_matrix(
        qotto::partial_trace(evolved, {2, spec.mu, 2}, 0));
}

/// Euler-angle SU(2) element Rz(a) Ry(b) Rz(c).
inline UnitaryMatrix su2_euler(double a, double b, double c) {
    const qotto::cplx eia{std::cos(0.5 * a), std::sin(0.5 * a)};
    const qotto::cplx eic{std::cos(0.5 * c), std::sin(0.5 * c)};
    const double cb = std::cos(0.5 * b), sb = std::sin(0.5 * b);
    UnitaryMatrix u(2, 2);
    u(0, 0) = std::conj(eia) * cb * std::conj(eic);
    u(0, 1) = -std::conj(eia) * sb * eic;
    u(1, 0) = eia * sb * std::conj(eic);
    u(1, 1) = eia * cb * eic;
    return u;
}

/// Brute-force minimum of tr(U rho U^dag H) over SU(2): a full Euler-angle
/// grid followed by coordinate descent with a shrinking step. Independent of
/// the spectral-rearrangement formula.
inline double min_energy_su2_grid(const qotto::DensityOperator& rho,
                                  const qotto::HamiltonianSpec& h,
                                  std::size_t points_per_axis = 22, int refine_iters = 80) {
    const ComplexMatrix hm = h.matrix();
    const auto energy_at = [&](double a, double b, double c) {
        const UnitaryMatrix u = su2_euler(a, b, c);
        return (hm * (u * rho.mat() * u.adjoint())).trace().real();
    };

    constexpr double two_pi = 6.283185307179586476925286766559005768;
    constexpr double pi = 3.14159265358979323846264338327950288;
    double best = energy_at(0.0, 0.0, 0.0);
    double ba = 0.0, bb = 0.0, bc = 0.0;
    const std::size_t n = points_per_axis;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double a = two_pi * static_cast<double>(i) / static_cast<double>(n);
                const double b = pi * static_cast<double>(j) / static_cast<double>(n - 1);
                const double c = two_pi * static_cast<double>(k) / static_cast<double>(n);
                const double e = energy_at(a, b, c);
                if (e < best) {
                    best = e;
                    ba = a;
                    bb = b;
                    bc = c;
                }
            }

    double step = pi / static_cast<double>(points_per_axis);
    for (int it = 0; it < refine_iters; ++it) {
        bool improved = false;
        for (double* coord : {&ba, &bb, &bc}) {
            for (double sign : {1.0, -1.0}) {
                const double saved = *coord;
                *coord = saved + sign * step;
                const double e = energy_at(ba, bb, bc);
                if (e < best) {
                    best = e;
                    improved = true;
                } else {
                    *coord = saved;
                }
            }
        }
        if (!improved) step *= 0.6;
    }
    return best;
}

}  // namespace oracles
