#pragma once

#include <array>
#include <cmath>

#include "quartit/linalg.hpp"

namespace quartit {

// Level ordering used throughout: index 0 = |3/2>, 1 = |1/2>, 2 = |-1/2>,
// 3 = |-3/2>. Reading the two logical qubits (A = high bit, B = low bit),
// this is |00>, |01>, |10>, |11>. All 4x4 matrices below live in this basis.

enum class Axis { X, Y, Z };

inline char axis_name(Axis a) {
    switch (a) {
        case Axis::X: return 'X';
        case Axis::Y: return 'Y';
        case Axis::Z: return 'Z';
    }
    return '?';
}

/// Pair of levels a transition-selective pulse addresses. delta_m = hi - lo
/// is the number of angular-momentum quanta (1 = single, 2 = double,
/// 3 = triple quantum).
struct Transition {
    int lo;
    int hi;

    Transition(int lo_, int hi_) : lo(lo_), hi(hi_) {
        if (lo < 0 || hi > 3 || lo >= hi)
            throw std::invalid_argument("Transition: need 0 <= lo < hi <= 3");
    }

    int delta_m() const { return hi - lo; }
    bool operator==(const Transition&) const = default;
};

inline const std::array<Transition, 6>& all_transitions() {
    static const std::array<Transition, 6> list = {
        Transition{0, 1}, Transition{1, 2}, Transition{2, 3},
        Transition{0, 2}, Transition{1, 3}, Transition{0, 3}};
    return list;
}

/// Magnetic quantum number of level index i (m = 3/2 - i).
inline double level_m(int i) { return 1.5 - i; }

/// Spin-3/2 angular momentum matrices (units of hbar) plus the quadrupole
/// pattern Q = diag(1,-1,-1,1): levels |+-3/2> shift up, |+-1/2> down.
struct SpinOperators {
    Matrix4c ix;
    Matrix4c iy;
    Matrix4c iz;
    Matrix4c q;
};

inline const SpinOperators& spin_operators() {
    static const SpinOperators ops = [] {
        SpinOperators o;
        o.ix.setZero();
        o.iy.setZero();
        o.iz.setZero();
        o.q.setZero();
        // I+ |m> = sqrt(I(I+1) - m(m+1)) |m+1>; with levels ordered by
        // decreasing m the raising operator populates the superdiagonal.
        const double s = 3.0 / 2.0;
        for (int i = 1; i < 4; ++i) {
            const double m = level_m(i);
            const double amp = std::sqrt(s * (s + 1) - m * (m + 1));
            o.ix(i - 1, i) = amp / 2.0;
            o.ix(i, i - 1) = amp / 2.0;
            o.iy(i - 1, i) = complexd(0.0, -amp / 2.0);
            o.iy(i, i - 1) = complexd(0.0, amp / 2.0);
        }
        for (int i = 0; i < 4; ++i) {
            o.iz(i, i) = level_m(i);
            o.q(i, i) = (i == 0 || i == 3) ? 1.0 : -1.0;
        }
        return o;
    }();
    return ops;
}

/// Single-qubit rotation about unit axis n: cos(t/2) I - i sin(t/2) n.sigma.
inline Matrix2c qubit_rotation(const Vector3d& n, double theta) {
    if (std::abs(n.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("qubit_rotation: axis must be a unit vector");
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Matrix2c u;
    u(0, 0) = complexd(c, -s * n.z());
    u(0, 1) = complexd(-s * n.y(), -s * n.x());
    u(1, 0) = complexd(s * n.y(), -s * n.x());
    u(1, 1) = complexd(c, s * n.z());
    return u;
}

/// 2x2 rotation about a coordinate axis. Sign conventions are fixed here
/// once and checked by every identity downstream: X has -i sin on the
/// off-diagonals, Y has -sin in the upper-right, Z is diag(e^{-it/2}, e^{it/2}).
inline Matrix2c axis_rotation(Axis k, double theta) {
    switch (k) {
        case Axis::X: return qubit_rotation(Vector3d::UnitX(), theta);
        case Axis::Y: return qubit_rotation(Vector3d::UnitY(), theta);
        case Axis::Z: return qubit_rotation(Vector3d::UnitZ(), theta);
    }
    throw std::invalid_argument("axis_rotation: bad axis");
}

/// Transition-selective rotation: the 2x2 axis rotation embedded in the
/// {t.lo, t.hi} subspace, identity on the other two levels.
inline Matrix4c selective_rotation(Transition t, Axis axis, double theta) {
    if (!std::isfinite(theta))
        throw std::invalid_argument("selective_rotation: angle must be finite");
    const Matrix2c block = axis_rotation(axis, theta);
    Matrix4c u = Matrix4c::Identity();
    u(t.lo, t.lo) = block(0, 0);
    u(t.lo, t.hi) = block(0, 1);
    u(t.hi, t.lo) = block(1, 0);
    u(t.hi, t.hi) = block(1, 1);
    return u;
}

/// Kronecker product with qubit A as the high bit: basis order
/// |00>, |01>, |10>, |11> = levels 0..3. Reference oracle for logical gates.
inline Matrix4c tensor2(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

/// Longitudinal magnetization tr(rho Iz), in units of hbar.
inline double mz(const Matrix4c& rho) {
    return (rho * spin_operators().iz).trace().real();
}

/// Conjugation u rho u^dag; preserves trace, Hermiticity and spectrum.
inline Matrix4c apply_unitary(const Matrix4c& u, const Matrix4c& rho) {
    return u * rho * u.adjoint();
}

inline Matrix4c basis_state(int level) {
    if (level < 0 || level > 3) throw std::invalid_argument("basis_state: level 0..3");
    Matrix4c rho = Matrix4c::Zero();
    rho(level, level) = 1.0;
    return rho;
}

}  // namespace quartit
