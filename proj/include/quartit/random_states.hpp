#pragma once

#include <random>

#include "quartit/linalg.hpp"

namespace quartit {

/// Box-Muller standard normal. Hand-rolled so seeded output is identical
/// across standard libraries.
inline double gaussian(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(std::numeric_limits<double>::min(), 1.0);
    const double u1 = uni(rng);
    const double u2 = uni(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi * u2);
}

/// Haar-random pure state: normalized complex Gaussian vector.
inline Vector4c random_pure_state(std::mt19937_64& rng) {
    Vector4c psi;
    for (int i = 0; i < 4; ++i) psi(i) = complexd(gaussian(rng), gaussian(rng));
    return psi / psi.norm();
}

inline Matrix4c random_pure_density(std::mt19937_64& rng) {
    const Vector4c psi = random_pure_state(rng);
    return psi * psi.adjoint();
}

/// Hilbert-Schmidt-random mixed state from a Ginibre matrix: G G^dag / tr.
inline Matrix4c random_mixed_density(std::mt19937_64& rng) {
    Matrix4c g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) g(i, j) = complexd(gaussian(rng), gaussian(rng));
    Matrix4c rho = g * g.adjoint();
    return rho / rho.trace().real();
}

}  // namespace quartit
