#pragma once

#include <cmath>
#include <vector>

#include "qotto/density.hpp"
#include "qotto/haar.hpp"
#include "qotto/matrix.hpp"
#include "qotto/rng.hpp"

namespace testutil {

using qotto::ComplexMatrix;
using qotto::cplx;

inline qotto::BlochVector random_bloch_in_ball(qotto::Philox4x32& rng) {
    // isotropic direction, radius with uniform volume density
    double nx = rng.normal(), ny = rng.normal(), nz = rng.normal();
    const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    const double r = std::cbrt(rng.uniform());
    return {r * nx / norm, r * ny / norm, r * nz / norm};
}

inline ComplexMatrix random_matrix(qotto::Philox4x32& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = cplx{rng.normal(), rng.normal()};
    return m;
}

inline ComplexMatrix random_hermitian(qotto::Philox4x32& rng, std::size_t dim) {
    const ComplexMatrix a = random_matrix(rng, dim, dim);
    return 0.5 * (a + a.adjoint());
}

/// Random full-support density operator: exponential weights normalized to a
/// probability vector, conjugated by a Haar unitary.
inline qotto::DensityOperator random_density(qotto::Philox4x32& rng, qotto::HaarSampler& haar,
                                             std::size_t dim) {
    std::vector<double> p(dim);
    double sum = 0.0;
    for (auto& v : p) {
        v = -std::log(1.0 - rng.uniform());
        sum += v;
    }
    ComplexMatrix d(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) d(i, i) = p[i] / sum;
    const auto u = haar.sample();
    return qotto::DensityOperator::from_matrix(u * d * u.adjoint());
}

}  // namespace testutil
