#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "qotto/density.hpp"
#include "qotto/haar.hpp"
#include "qotto/matrix.hpp"

namespace qotto {

/// Cosine/sine of the partial-swap angle, snapped so that alpha == pi/2 (the
/// closest double to it) gives an exact complete swap instead of cos ~ 6e-17.
inline std::pair<double, double> swap_cos_sin(double alpha) {
    constexpr double half_pi = 1.57079632679489661923132169163975144;
    if (alpha == half_pi) return {0.0, 1.0};
    return {std::cos(alpha), std::sin(alpha)};
}

/// Reservoir configuration for one engine/battery setup: the hot units are
/// mu-dimensional qudits in state chi (pure), the cold units are qubits in
/// state theta, and the cold interaction is a partial swap of angle alpha.
struct ReservoirSpec {
    std::size_t mu;
    double alpha;
    DensityOperator hot_unit;   // dim mu, pure
    DensityOperator cold_unit;  // dim 2

    static ReservoirSpec make(std::size_t mu, double alpha) {
        return with_states(mu, alpha, DensityOperator::basis_state(mu, 0),
                           DensityOperator::basis_state(2, 1));
    }

    static ReservoirSpec with_states(std::size_t mu, double alpha, DensityOperator chi,
                                     DensityOperator theta) {
        constexpr double half_pi = 1.57079632679489661923132169163975144;
        if (mu < 2) throw std::invalid_argument("ReservoirSpec: mu must be >= 2");
        if (!(alpha >= 0.0 && alpha <= half_pi))
            throw std::invalid_argument("ReservoirSpec: alpha must lie in [0, pi/2], got " +
                                        std::to_string(alpha));
        if (chi.dim() != mu)
            throw std::invalid_argument("ReservoirSpec: hot unit dimension " +
                                        std::to_string(chi.dim()) + " does not match mu = " +
                                        std::to_string(mu));
        if (std::abs(chi.purity() - 1.0) > kStateTol)
            throw std::invalid_argument("ReservoirSpec: hot unit must be pure, purity = " +
                                        std::to_string(chi.purity()));
        if (theta.dim() != 2)
            throw std::invalid_argument("ReservoirSpec: cold unit must be a qubit state");
        return ReservoirSpec{mu, alpha, std::move(chi), std::move(theta)};
    }
};

/// Partial-swap unitary on qubit x qubit, P = cos(alpha) I + i sin(alpha) S,
/// in the product basis (uu, ud, du, dd).
inline UnitaryMatrix partial_swap_unitary(double alpha) {
    constexpr double half_pi = 1.57079632679489661923132169163975144;
    if (!(alpha >= 0.0 && alpha <= half_pi))
        throw std::invalid_argument("partial_swap_unitary: alpha must lie in [0, pi/2]");
    const auto [c, s] = swap_cos_sin(alpha);
    const cplx is{0.0, s};
    UnitaryMatrix p(4, 4);
    p(0, 0) = c + is;
    p(1, 1) = c;
    p(1, 2) = is;
    p(2, 1) = is;
    p(2, 2) = c;
    p(3, 3) = c + is;
    return p;
}

/// Cold collision in closed form: tracing the swap partner out of
/// P (rho x theta) P^dag gives
///   rho' = cos^2 rho + sin^2 theta + i sin cos [theta, rho].
inline DensityOperator cold_collision(const DensityOperator& rho, const ReservoirSpec& spec) {
    if (rho.dim() != 2) throw std::invalid_argument("cold_collision: system must be a qubit");
    const auto [c, s] = swap_cos_sin(spec.alpha);
    const ComplexMatrix& r = rho.mat();
    const ComplexMatrix& t = spec.cold_unit.mat();
    ComplexMatrix out = (c * c) * r + (s * s) * t + cplx{0.0, s * c} * (t * r - r * t);
    return DensityOperator::from_matrix(out);
}

/// Hot collision: couple the system to a fresh hot unit, apply a
/// Haar-random unitary on the joint space, trace the unit out.
template <typename Sampler>
DensityOperator hot_collision(const DensityOperator& rho, const ReservoirSpec& spec,
                              Sampler& sampler) {
    if (rho.dim() != 2) throw std::invalid_argument("hot_collision: system must be a qubit");
    if (sampler.dim() != 2 * spec.mu)
        throw std::invalid_argument("hot_collision: sampler dimension " +
                                    std::to_string(sampler.dim()) + " != 2 * mu = " +
                                    std::to_string(2 * spec.mu));
    const UnitaryMatrix u = sampler.sample();
    const ComplexMatrix joint = kron(rho.mat(), spec.hot_unit.mat());
    const ComplexMatrix evolved = u * joint * u.adjoint();
    return DensityOperator::from_matrix(partial_trace(evolved, {2, spec.mu}, 0));
}

/// One full hot-then-cold collision round.
template <typename Sampler>
DensityOperator cycle_map(const DensityOperator& rho, const ReservoirSpec& spec,
                          Sampler& sampler) {
    return cold_collision(hot_collision(rho, spec, sampler), spec);
}

}  // namespace qotto
