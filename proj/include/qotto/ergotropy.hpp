#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qotto/density.hpp"
#include "qotto/matrix.hpp"

namespace qotto {

/// Diagonal Hamiltonian given by its spectrum in ascending order plus the
/// basis index each level lives on. The qubit battery convention is
/// H = (delta/2) sigma_z with ground state |down> = e_1, so the ascending
/// levels sit on basis indices (1, 0).
struct HamiltonianSpec {
    std::vector<double> energies;        // ascending
    std::vector<std::size_t> basis_idx;  // basis_idx[n] hosts energies[n]

    static HamiltonianSpec qubit(double delta) {
        if (!(delta > 0.0))
            throw std::invalid_argument("HamiltonianSpec: level splitting must be positive");
        return HamiltonianSpec{{-0.5 * delta, 0.5 * delta}, {1, 0}};
    }

    static HamiltonianSpec diagonal(std::vector<double> ascending) {
        if (ascending.size() < 2)
            throw std::invalid_argument("HamiltonianSpec: need at least two levels");
        if (!std::is_sorted(ascending.begin(), ascending.end()))
            throw std::invalid_argument("HamiltonianSpec: energies must be ascending");
        std::vector<std::size_t> idx(ascending.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        return HamiltonianSpec{std::move(ascending), std::move(idx)};
    }

    std::size_t dim() const { return energies.size(); }

    ComplexMatrix matrix() const {
        ComplexMatrix h(dim(), dim());
        for (std::size_t n = 0; n < dim(); ++n) h(basis_idx[n], basis_idx[n]) = energies[n];
        return h;
    }

    double energy(const DensityOperator& rho) const {
        if (rho.dim() != dim())
            throw std::invalid_argument("HamiltonianSpec::energy: dimension mismatch");
        double e = 0.0;
        for (std::size_t n = 0; n < dim(); ++n)
            e += energies[n] * rho.mat()(basis_idx[n], basis_idx[n]).real();
        return e;
    }
};

/// Passive state of rho under h: the spectrum of rho rearranged so that the
/// largest population sits on the lowest level.
inline DensityOperator passive_state(const DensityOperator& rho, const HamiltonianSpec& h) {
    if (rho.dim() != h.dim())
        throw std::invalid_argument("passive_state: state and Hamiltonian dimensions differ");
    const HermitianEigen eig = eigen_hermitian(rho.mat());  // values descending
    ComplexMatrix p(rho.dim(), rho.dim());
    for (std::size_t n = 0; n < rho.dim(); ++n) p(h.basis_idx[n], h.basis_idx[n]) = eig.values[n];
    return DensityOperator::from_matrix(p);
}

/// Ergotropy E = tr(rho H) - tr(pi H), with pi the passive state. The passive
/// energy only needs the spectrum: descending populations on ascending levels.
inline double ergotropy(const DensityOperator& rho, const HamiltonianSpec& h) {
    if (rho.dim() != h.dim())
        throw std::invalid_argument("ergotropy: state and Hamiltonian dimensions differ");
    const HermitianEigen eig = eigen_hermitian(rho.mat());
    double passive_energy = 0.0;
    for (std::size_t n = 0; n < rho.dim(); ++n) passive_energy += eig.values[n] * h.energies[n];
    return h.energy(rho) - passive_energy;
}

/// Qubit fast path: for H = (delta/2) sigma_z, E = (delta/2) (r + z).
inline double ergotropy_qubit_bloch(const BlochVector& b, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("ergotropy_qubit_bloch: level splitting must be positive");
    const double r = b.r();
    if (r > 1.0 + kStateTol)
        throw std::invalid_argument("ergotropy_qubit_bloch: Bloch norm " + std::to_string(r) +
                                    " exceeds 1");
    return 0.5 * delta * (r + b.z);
}

}  // namespace qotto
