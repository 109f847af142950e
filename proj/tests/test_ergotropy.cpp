#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qotto/density.hpp"
#include "qotto/ergotropy.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace qotto;
using testutil::random_bloch_in_ball;

TEST_CASE("HamiltonianSpec construction") {
    REQUIRE_THROWS_AS(HamiltonianSpec::qubit(0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(HamiltonianSpec::qubit(-1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(HamiltonianSpec::diagonal({1.0, 0.5}), std::invalid_argument);
    REQUIRE_THROWS_AS(HamiltonianSpec::diagonal({1.0}), std::invalid_argument);

    const auto h = HamiltonianSpec::qubit(2.0);
    REQUIRE(h.dim() == 2);
    REQUIRE(h.energies[0] == -1.0);
    REQUIRE(h.energies[1] == 1.0);
    // H = (delta/2) sigma_z: +delta/2 on |up> = e_0
    const ComplexMatrix m = h.matrix();
    REQUIRE(m(0, 0) == cplx{1.0, 0.0});
    REQUIRE(m(1, 1) == cplx{-1.0, 0.0});
    REQUIRE(m.max_abs_diff(1.0 * pauli_z()) == 0.0);

    // energy() equals the trace form
    Philox4x32 rng(41, 0);
    for (int i = 0; i < 200; ++i) {
        const auto rho = density_from_bloch(random_bloch_in_ball(rng));
        const double direct = h.energy(rho);
        const double traced = (m * rho.mat()).trace().real();
        REQUIRE(std::abs(direct - traced) < 1e-13);
    }

    REQUIRE_THROWS_AS(h.energy(DensityOperator::maximally_mixed(3)), std::invalid_argument);
}

TEST_CASE("passive state rearrangement") {
    const auto h = HamiltonianSpec::qubit(1.0);

    // population inversion
    const auto up = DensityOperator::basis_state(2, 0);
    REQUIRE(passive_state(up, h).mat().max_abs_diff(DensityOperator::basis_state(2, 1).mat()) <
            1e-14);

    // already passive: diag(0.3, 0.7) in (up, down) order
    ComplexMatrix d(2, 2);
    d(0, 0) = 0.3;
    d(1, 1) = 0.7;
    const auto rho_d = DensityOperator::from_matrix(d);
    REQUIRE(passive_state(rho_d, h).mat().max_abs_diff(d) < 1e-14);

    // rho = (I + 0.6 sigma_x)/2 -> diag(0.2, 0.8)
    const auto rho_x = density_from_bloch({0.6, 0.0, 0.0});
    const auto pi_x = passive_state(rho_x, h);
    REQUIRE(std::abs(pi_x.mat()(0, 0) - cplx{0.2, 0.0}) < 1e-12);
    REQUIRE(std::abs(pi_x.mat()(1, 1) - cplx{0.8, 0.0}) < 1e-12);
    REQUIRE(std::abs(pi_x.mat()(0, 1)) == 0.0);

    // spectrum is preserved
    Philox4x32 rng(42, 0);
    HaarSampler haar(3, 42, 0);
    const auto h3 = HamiltonianSpec::diagonal({-1.0, 0.25, 2.0});
    for (int i = 0; i < 100; ++i) {
        const auto rho = testutil::random_density(rng, haar, 3);
        const auto p = passive_state(rho, h3);
        const auto er = eigen_hermitian(rho.mat());
        const auto ep = eigen_hermitian(p.mat());
        for (std::size_t k = 0; k < 3; ++k)
            REQUIRE(std::abs(er.values[k] - ep.values[k]) < 1e-12);
        // passivity: populations non-increasing with energy
        for (std::size_t n = 0; n + 1 < 3; ++n)
            REQUIRE(p.mat()(n, n).real() >= p.mat()(n + 1, n + 1).real() - 1e-12);
    }

    REQUIRE_THROWS_AS(passive_state(DensityOperator::maximally_mixed(3), h),
                      std::invalid_argument);
}

TEST_CASE("ergotropy reference values") {
    const double delta = 1.7;
    const auto h = HamiltonianSpec::qubit(delta);

    REQUIRE(ergotropy(DensityOperator::basis_state(2, 1), h) == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(ergotropy(DensityOperator::maximally_mixed(2), h) ==
            Catch::Approx(0.0).margin(1e-14));
    REQUIRE(ergotropy(DensityOperator::basis_state(2, 0), h) ==
            Catch::Approx(delta).margin(1e-12));
    REQUIRE(ergotropy(density_from_bloch({1.0, 0.0, 0.0}), h) ==
            Catch::Approx(0.5 * delta).margin(1e-12));
}

TEST_CASE("ergotropy nonnegative and zero exactly on passive states") {
    const auto h = HamiltonianSpec::qubit(1.0);
    Philox4x32 rng(43, 0);
    for (int i = 0; i < 10000; ++i) {
        const auto rho = density_from_bloch(random_bloch_in_ball(rng));
        REQUIRE(ergotropy(rho, h) >= -1e-13);
    }

    // diagonal, descending on ascending energies: exactly passive
    ComplexMatrix d(2, 2);
    d(0, 0) = 0.25;  // up level, energy +1/2
    d(1, 1) = 0.75;  // down level, energy -1/2
    REQUIRE(ergotropy(DensityOperator::from_matrix(d), h) == Catch::Approx(0.0).margin(1e-14));

    // inverted populations: strictly positive
    ComplexMatrix inv(2, 2);
    inv(0, 0) = 0.75;
    inv(1, 1) = 0.25;
    REQUIRE(ergotropy(DensityOperator::from_matrix(inv), h) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("ergotropy is a spectrum functional under unitary conjugation") {
    const auto h = HamiltonianSpec::qubit(1.3);
    Philox4x32 rng(44, 0);
    HaarSampler haar(2, 44, 0);
    for (int i = 0; i < 200; ++i) {
        const auto rho = density_from_bloch(random_bloch_in_ball(rng));
        const UnitaryMatrix u = haar.sample();
        const auto rotated = DensityOperator::from_matrix(u * rho.mat() * u.adjoint());
        // passive energy depends only on the spectrum, which conjugation keeps
        const double passive_rho = h.energy(rho) - ergotropy(rho, h);
        const double passive_rot = h.energy(rotated) - ergotropy(rotated, h);
        REQUIRE(std::abs(passive_rho - passive_rot) < 1e-11);
    }
}

TEST_CASE("brute-force SU(2) minimization oracle") {
    const auto h = HamiltonianSpec::qubit(1.0);
    Philox4x32 rng(45, 0);
    for (int i = 0; i < 10; ++i) {
        const auto rho = density_from_bloch(random_bloch_in_ball(rng));
        const double passive_energy = h.energy(rho) - ergotropy(rho, h);
        const double grid_min = oracles::min_energy_su2_grid(rho, h);
        REQUIRE(grid_min >= passive_energy - 1e-6);
        REQUIRE(std::abs(grid_min - passive_energy) < 1e-4);
    }
}

TEST_CASE("qubit Bloch shortcut") {
    REQUIRE(ergotropy_qubit_bloch({0, 0, -1}, 1.0) == 0.0);
    REQUIRE(ergotropy_qubit_bloch({0, 0, 1}, 2.0) == Catch::Approx(2.0).margin(1e-15));
    REQUIRE(ergotropy_qubit_bloch({0.6, 0.0, 0.8}, 2.0) == Catch::Approx(1.8).margin(1e-12));
    REQUIRE_THROWS_AS(ergotropy_qubit_bloch({1.2, 0, 0}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ergotropy_qubit_bloch({0, 0, 0.5}, 0.0), std::invalid_argument);

    const double delta = 0.8;
    const auto h = HamiltonianSpec::qubit(delta);
    Philox4x32 rng(46, 0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const auto b = random_bloch_in_ball(rng);
        const double fast = ergotropy_qubit_bloch(b, delta);
        const double full = ergotropy(density_from_bloch(b), h);
        worst = std::max(worst, std::abs(fast - full));
    }
    REQUIRE(worst < 1e-12);
}
