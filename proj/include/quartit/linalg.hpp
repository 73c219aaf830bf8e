#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "quartit/common.hpp"

namespace quartit {

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;
using Vector3d = Eigen::Vector3d;

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = algebra_tol) {
    return (m - m.adjoint()).norm() <= tol;
}

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& m, double tol = algebra_tol) {
    const auto n = m.rows();
    return (m.adjoint() * m - Derived::PlainObject::Identity(n, n)).norm() <= tol &&
           std::abs(std::abs(m.determinant()) - 1.0) <= tol;
}

/// A density matrix must be Hermitian with unit trace and (numerically)
/// non-negative eigenvalues. Deviation/pseudopure analysis of non-positive
/// deviations lives elsewhere; this is the physical-state check.
inline bool is_density_matrix(const Matrix4c& rho, double tol = algebra_tol,
                              double eig_floor = -1e-10) {
    if (!is_hermitian(rho, tol)) return false;
    if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol)
        return false;
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= eig_floor;
}

/// Result of comparing two unitaries modulo a global phase.
struct PhaseMatch {
    bool equal = false;
    bool phase_defined = false;   // false when tr(v^dag u) == 0 ("orthogonal, no phase")
    complexd phase{1.0, 0.0};     // best c with u ~ c v, unit modulus
    double error = 0.0;           // ||u - c v||_F with the best c
};

/// True iff there is a unit-modulus c with ||u - c v||_F <= tol.
/// The optimal c is tr(v^dag u) / |tr(v^dag u)| when the trace is nonzero.
template <typename DerivedU, typename DerivedV>
PhaseMatch equal_up_to_phase(const Eigen::MatrixBase<DerivedU>& u,
                             const Eigen::MatrixBase<DerivedV>& v,
                             double tol = eigen_tol) {
    PhaseMatch result;
    const complexd overlap = (v.adjoint() * u).trace();
    if (std::abs(overlap) < 1e-14 * std::max(1.0, u.norm() * v.norm())) {
        result.phase_defined = false;
        result.equal = false;
        result.error = (u - v).norm();
        return result;
    }
    result.phase_defined = true;
    result.phase = overlap / std::abs(overlap);
    result.error = (u - result.phase * v).norm();
    result.equal = result.error <= tol;
    return result;
}

/// Phase-adjusted Frobenius distance min_c ||u - c v||_F over unit-modulus c.
template <typename DerivedU, typename DerivedV>
double phase_distance(const Eigen::MatrixBase<DerivedU>& u,
                      const Eigen::MatrixBase<DerivedV>& v) {
    return equal_up_to_phase(u, v, 0.0).error;
}

/// exp(-i h t) for Hermitian h (angular-frequency units, rad/s), via
/// eigendecomposition. Exact up to floating point; no step-size error.
inline Matrix4c hermitian_propagator(const Matrix4c& h, double t) {
    if (!is_hermitian(h, 1e-9 * (1.0 + h.norm())))
        throw std::invalid_argument("hermitian_propagator: generator is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
    Vector4c phases;
    for (int k = 0; k < 4; ++k)
        phases(k) = std::exp(complexd(0.0, -es.eigenvalues()(k) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Nearest positive-semidefinite state: clip negative eigenvalues to zero
/// and renormalize the trace to one.
inline Matrix4c project_to_psd(const Matrix4c& rho) {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho);
    Eigen::Vector4d vals = es.eigenvalues().cwiseMax(0.0);
    const double total = vals.sum();
    if (total <= 0.0)
        throw NumericalError("project_to_psd: all eigenvalues non-positive");
    vals /= total;
    return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

inline std::vector<double> linspace(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> out(static_cast<size_t>(n));
    if (n == 1) {
        out[0] = a;
        return out;
    }
    const double step = (b - a) / (n - 1);
    for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = a + step * i;
    out.back() = b;
    return out;
}

}  // namespace quartit
