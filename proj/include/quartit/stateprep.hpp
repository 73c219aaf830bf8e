#pragma once

#include <array>

#include "quartit/gates.hpp"

namespace quartit {

// Effective pure (pseudopure) state preparation from the dynamically
// polarized initial state. The device's polarization condition is chosen so
// populations increase linearly with the spin quantum number, i.e. decrease
// linearly with level index.

/// Diagonal state with populations (c+3d, c+2d, c+d, c), c = (1-6d)/4.
/// Mz of this state is 5d.
inline Matrix4c initial_polarized_state(double d) {
    if (d < 0.0 || d > 1.0 / 6.0)
        throw std::invalid_argument("initial_polarized_state: d outside [0, 1/6]");
    const double c = (1.0 - 6.0 * d) / 4.0;
    Matrix4c rho = Matrix4c::Zero();
    for (int i = 0; i < 4; ++i) rho(i, i) = c + (3 - i) * d;
    return rho;
}

enum class PrepVariant { single_quantum_path, two_photon_shortcut };

/// Pulse sequence (time order) preparing the pseudopure state for the given
/// two-qubit target from the linearly polarized initial state. |00> and
/// |11> have a two-pulse single-quantum path and a one-pulse two-photon
/// shortcut; |10> and |01> use the two-photon sequences directly.
inline PulseSequence prep_sequence(int target,
                                   PrepVariant variant = PrepVariant::single_quantum_path) {
    switch (target) {
        case 0:  // |00>: excess on level 0
            if (variant == PrepVariant::two_photon_shortcut)
                return {pulse(1, 3, Axis::X, pi / 2)};
            return {pulse(1, 2, Axis::X, pi), pulse(2, 3, Axis::X, pi / 2)};
        case 1:  // |01>: excess on level 1
            return {pulse(1, 3, Axis::X, pi / 2), pulse(0, 1, Axis::X, pi)};
        case 2:  // |10>: deficit on level 2
            return {pulse(0, 2, Axis::X, pi / 2), pulse(2, 3, Axis::X, pi)};
        case 3:  // |11>: deficit on level 3
            if (variant == PrepVariant::two_photon_shortcut)
                return {pulse(0, 2, Axis::X, pi / 2)};
            return {pulse(1, 2, Axis::X, pi), pulse(0, 1, Axis::X, pi / 2)};
        default:
            throw std::invalid_argument("prep_sequence: target must be 0..3");
    }
}

/// After preparing |11>, a single pi pulse on (target, 3) swaps the
/// populations of the target level and level 3, moving the deficit.
inline PulseSequence switch_from_11(int target) {
    if (target < 0 || target > 2)
        throw std::invalid_argument("switch_from_11: target must be 0..2");
    return {pulse(target, 3, Axis::X, pi)};
}

/// Zero all off-diagonal elements. Models the waiting-time option
/// T2 < t < T1 between preparation and readout: coherences die, the
/// designed populations persist.
inline Matrix4c settle(const Matrix4c& rho) {
    Matrix4c out = Matrix4c::Zero();
    out.diagonal() = rho.diagonal();
    return out;
}

struct PseudopurityReport {
    int level = -1;         // best target level k
    double alpha = 0.0;     // coefficient of I/4
    double beta = 0.0;      // coefficient of |k><k|; negative = deficit form
    double residual = 0.0;  // Frobenius norm of the remainder
    bool pseudopure = false;
    bool maximally_mixed = false;
};

/// Least-squares decomposition rho = alpha I/4 + beta |k><k| + remainder,
/// minimized over k. Both excess (beta > 0) and deficit (beta < 0) forms
/// count as pseudopure when the remainder is below tol.
inline PseudopurityReport pseudopurity_check(const Matrix4c& rho, double tol = 1e-10) {
    PseudopurityReport best;
    best.residual = std::numeric_limits<double>::infinity();
    std::array<double, 4> betas{};
    for (int k = 0; k < 4; ++k) {
        // Normal equations for the non-orthogonal pair {I/4, |k><k|}:
        // <I/4,I/4> = 1/4, <I/4,P> = 1/4, <P,P> = 1 with tr(rho) = 1.
        const double pkk = rho(k, k).real();
        const double alpha = (4.0 / 3.0) * (1.0 - pkk);
        const double beta = (4.0 * pkk - 1.0) / 3.0;
        Matrix4c rem = rho - alpha * Matrix4c::Identity() / 4.0;
        rem(k, k) -= beta;
        const double residual = rem.norm();
        betas[static_cast<size_t>(k)] = beta;
        if (residual < best.residual - 1e-15 ||
            (std::abs(residual - best.residual) <= 1e-15 &&
             std::abs(beta) > std::abs(best.beta))) {
            best.level = k;
            best.alpha = alpha;
            best.beta = beta;
            best.residual = residual;
        }
    }
    best.pseudopure = best.residual < tol;
    bool all_beta_zero = true;
    for (double b : betas) all_beta_zero = all_beta_zero && std::abs(b) < 1e-12;
    best.maximally_mixed = all_beta_zero && best.residual < tol;
    return best;
}

/// Pure-state population available from thermal equilibrium,
/// h f0 / (4 kB T) per spin. Dynamic polarization beats this by orders of
/// magnitude, which is the whole point of preparing from the polarized state.
inline double thermal_fraction(double f0_hz, double temperature_k) {
    if (!(temperature_k > 0.0))
        throw std::invalid_argument("thermal_fraction: temperature must be > 0");
    return planck_h * f0_hz / (4.0 * boltzmann_kb * temperature_k);
}

/// Convenience: run a preparation sequence on the polarized initial state.
/// With settle_after (the default) residual coherences from pi/2 pulses are
/// zeroed before the state is returned.
inline Matrix4c prepared_state(double d, int target,
                               PrepVariant variant = PrepVariant::single_quantum_path,
                               bool settle_after = true) {
    const Matrix4c rho = apply_unitary(compose(prep_sequence(target, variant)),
                                       initial_polarized_state(d));
    return settle_after ? settle(rho) : rho;
}

}  // namespace quartit
