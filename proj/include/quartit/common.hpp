#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace quartit {

using complexd = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr complexd imag_unit{0.0, 1.0};

// CODATA 2018 exact values
inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double boltzmann_kb = 1.380649e-23;   // J / K

// Default tolerances: algebraic identities on products of a handful of
// 4x4 matrices stay well inside 1e-12; eigenvalue checks get extra slack.
inline constexpr double algebra_tol = 1e-12;
inline constexpr double eigen_tol = 1e-10;

/// Thrown when an iterative numeric procedure (calibration, fit, search)
/// cannot produce a result.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quartit
