#pragma once

#include <span>
#include <string>
#include <vector>

#include "quartit/spin.hpp"

namespace quartit {

// Pulse sequences are stored in TIME order: the first element is applied
// first. Operator products written right-to-left are therefore reversed
// when turned into a sequence; every constructor below does that reversal
// explicitly where it matters.

struct IdealPulse {
    Transition transition;
    Axis axis;
    double theta;  // radians

    bool operator==(const IdealPulse&) const = default;
};

using PulseSequence = std::vector<IdealPulse>;

enum class LogicalQubit { A, B };  // A = high bit of the level index
enum class RotationStrategy { two_photon, single_photon };
enum class HadamardVariant { xy, yz };
enum class CnotVariant { pound_overhauser_y, x_variant, exact };
enum class SwapVariant { composed, single_pulse_y, single_pulse_x };
enum class ReplacementTarget { no_three_photon, single_photon_only };

inline IdealPulse pulse(int lo, int hi, Axis axis, double theta) {
    return IdealPulse{Transition{lo, hi}, axis, theta};
}

/// Product of the pulses' unitaries; the last pulse in time ends up leftmost.
inline Matrix4c compose(const PulseSequence& seq) {
    Matrix4c u = Matrix4c::Identity();
    for (const auto& p : seq)
        u = selective_rotation(p.transition, p.axis, p.theta) * u;
    return u;
}

// ---------------------------------------------------------------------------
// Reference unitaries (tensor-product oracles)
// ---------------------------------------------------------------------------

inline Matrix2c hadamard2() {
    Matrix2c h;
    h << 1, 1, 1, -1;
    return h / std::sqrt(2.0);
}

inline Matrix4c hadamard_matrix(LogicalQubit q) {
    return q == LogicalQubit::A ? tensor2(hadamard2(), Matrix2c::Identity())
                                : tensor2(Matrix2c::Identity(), hadamard2());
}

inline Matrix4c logical_rotation_matrix(LogicalQubit q, Axis axis, double theta) {
    const Matrix2c r = axis_rotation(axis, theta);
    return q == LogicalQubit::A ? tensor2(r, Matrix2c::Identity())
                                : tensor2(Matrix2c::Identity(), r);
}

/// CNOT with the given control; control A flips B on levels {2,3},
/// control B flips A on levels {1,3}.
inline Matrix4c cnot_matrix(LogicalQubit control) {
    Matrix4c u = Matrix4c::Zero();
    if (control == LogicalQubit::A) {
        u(0, 0) = u(1, 1) = 1.0;
        u(2, 3) = u(3, 2) = 1.0;
    } else {
        u(0, 0) = u(2, 2) = 1.0;
        u(1, 3) = u(3, 1) = 1.0;
    }
    return u;
}

inline Matrix4c swap_matrix() {
    Matrix4c u = Matrix4c::Zero();
    u(0, 0) = u(3, 3) = 1.0;
    u(1, 2) = u(2, 1) = 1.0;
    return u;
}

// ---------------------------------------------------------------------------
// Gate constructors
// ---------------------------------------------------------------------------

/// Rotation of one logical qubit. Qubit B uses the two single-quantum
/// transitions; qubit A uses either the two two-photon transitions or the
/// single-photon conjugation form. Commuting pulse pairs are emitted in
/// ascending-transition order so golden tests are deterministic.
inline PulseSequence logical_rotation(LogicalQubit q, Axis axis, double theta,
                                      RotationStrategy strategy = RotationStrategy::two_photon) {
    if (q == LogicalQubit::B)
        return {pulse(0, 1, axis, theta), pulse(2, 3, axis, theta)};
    if (strategy == RotationStrategy::two_photon)
        return {pulse(0, 2, axis, theta), pulse(1, 3, axis, theta)};
    // Single-photon form: conjugate a counter-rotating single-quantum pair
    // by Y12(pi). The Z line keeps the same sign on both blocks (diagonal
    // generators pick up no sign under the conjugation), unlike X and Y.
    if (axis == Axis::Z)
        return {pulse(1, 2, Axis::Y, -pi), pulse(2, 3, Axis::Z, theta),
                pulse(0, 1, Axis::Z, theta), pulse(1, 2, Axis::Y, pi)};
    return {pulse(1, 2, Axis::Y, -pi), pulse(2, 3, axis, -theta),
            pulse(0, 1, axis, theta), pulse(1, 2, Axis::Y, pi)};
}

inline PulseSequence hadamard(LogicalQubit q, HadamardVariant v = HadamardVariant::xy) {
    if (q == LogicalQubit::B) {
        if (v == HadamardVariant::xy)
            return {pulse(2, 3, Axis::Y, pi / 2), pulse(2, 3, Axis::X, pi),
                    pulse(0, 1, Axis::Y, pi / 2), pulse(0, 1, Axis::X, pi)};
        return {pulse(2, 3, Axis::Z, pi), pulse(2, 3, Axis::Y, pi / 2),
                pulse(0, 1, Axis::Z, pi), pulse(0, 1, Axis::Y, pi / 2)};
    }
    if (v == HadamardVariant::xy)
        return {pulse(1, 2, Axis::Y, -pi),     pulse(2, 3, Axis::Y, -pi / 2),
                pulse(2, 3, Axis::X, -pi),     pulse(0, 1, Axis::Y, pi / 2),
                pulse(0, 1, Axis::X, pi),      pulse(1, 2, Axis::Y, pi)};
    return {pulse(1, 2, Axis::Y, -pi),     pulse(2, 3, Axis::Z, pi),
            pulse(2, 3, Axis::Y, -pi / 2), pulse(0, 1, Axis::Z, pi),
            pulse(0, 1, Axis::Y, pi / 2),  pulse(1, 2, Axis::Y, pi)};
}

namespace detail {

/// Angles (t01, t12, t23) of adjacent Z rotations realizing the relative
/// phases of a diagonal unitary (global phase free). The 3x3 system is
/// always solvable: adjacent Z generators span all traceless diagonals.
inline std::array<double, 3> z_angles_for_diagonal(const Vector4c& diag) {
    Eigen::Vector3d rhs;
    for (int i = 0; i < 3; ++i) {
        const complexd ratio = diag(i + 1) / diag(i);
        rhs(i) = std::arg(ratio);
    }
    Eigen::Matrix3d m;
    m << 1.0, -0.5, 0.0,
        -0.5, 1.0, -0.5,
         0.0, -0.5, 1.0;
    const Eigen::Vector3d angles = m.colPivHouseholderQr().solve(rhs);
    return {angles(0), angles(1), angles(2)};
}

/// Append the Z-rotation realization of a diagonal correction, dropping
/// numerically-zero angles.
inline void append_diagonal_correction(PulseSequence& seq, const Matrix4c& correction) {
    Matrix4c offdiag = correction;
    offdiag.diagonal().setZero();
    if (offdiag.norm() > 1e-9)
        throw NumericalError("append_diagonal_correction: correction is not diagonal");
    const auto angles = z_angles_for_diagonal(correction.diagonal());
    const Transition ts[3] = {Transition{0, 1}, Transition{1, 2}, Transition{2, 3}};
    for (int i = 0; i < 3; ++i)
        if (std::abs(angles[i]) > 1e-14)
            seq.push_back(IdealPulse{ts[i], Axis::Z, angles[i]});
}

}  // namespace detail

/// Pound-Overhauser CNOT (one selective pi pulse) or its X-phase cousin;
/// `exact` additionally appends a diagonal correction, realized from Z
/// rotations, so the composition matches the true CNOT up to global phase.
inline PulseSequence cnot(LogicalQubit control, CnotVariant v = CnotVariant::pound_overhauser_y) {
    const Transition t = control == LogicalQubit::A ? Transition{2, 3} : Transition{1, 3};
    switch (v) {
        case CnotVariant::pound_overhauser_y:
            return {IdealPulse{t, Axis::Y, pi}};
        case CnotVariant::x_variant:
            return {IdealPulse{t, Axis::X, pi}};
        case CnotVariant::exact: {
            PulseSequence seq = {IdealPulse{t, Axis::Y, pi}};
            const Matrix4c correction = cnot_matrix(control) * compose(seq).adjoint();
            detail::append_diagonal_correction(seq, correction);
            return seq;
        }
    }
    throw std::invalid_argument("cnot: bad variant");
}

inline PulseSequence swap_gate(SwapVariant v = SwapVariant::composed) {
    switch (v) {
        case SwapVariant::single_pulse_y:
            return {pulse(1, 2, Axis::Y, pi)};
        case SwapVariant::single_pulse_x:
            return {pulse(1, 2, Axis::X, pi)};
        case SwapVariant::composed: {
            PulseSequence seq = cnot(LogicalQubit::A, CnotVariant::exact);
            const PulseSequence mid = cnot(LogicalQubit::B, CnotVariant::exact);
            const PulseSequence outer = seq;
            seq.insert(seq.end(), mid.begin(), mid.end());
            seq.insert(seq.end(), outer.begin(), outer.end());
            return seq;
        }
    }
    throw std::invalid_argument("swap_gate: bad variant");
}

/// Rewrite a multi-quantum rotation as a conjugated sequence of lower-order
/// pulses. `no_three_photon` eliminates (0,3) pulses only;
/// `single_photon_only` leaves nothing above delta_m = 1. The composition
/// always equals the original selective rotation (up to global phase).
inline PulseSequence appendix_replace(const IdealPulse& p, ReplacementTarget target) {
    const Transition t = p.transition;
    if (t.delta_m() == 1) return {p};
    if (p.axis == Axis::Z)
        throw std::invalid_argument("appendix_replace: Z rotations not covered by "
                                    "the conjugation identities");
    const double th = p.theta;
    const Axis k = p.axis;

    if (target == ReplacementTarget::no_three_photon) {
        if (t.delta_m() < 3) return {p};
        // K03(t) = Y13(pi) K01(t) Y13(-pi), K in {X, Y}
        return {pulse(1, 3, Axis::Y, -pi), pulse(0, 1, k, th), pulse(1, 3, Axis::Y, pi)};
    }

    // single_photon_only
    if (t == Transition{1, 3})
        return {pulse(2, 3, Axis::Y, -pi), pulse(1, 2, k, th), pulse(2, 3, Axis::Y, pi)};
    if (t == Transition{0, 2})
        return {pulse(1, 2, Axis::Y, -pi), pulse(0, 1, k, th), pulse(1, 2, Axis::Y, pi)};
    // (0,3): K03(t) = Y01(pi) Y23(pi) K12(-t) Y23(-pi) Y01(-pi)
    return {pulse(0, 1, Axis::Y, -pi), pulse(2, 3, Axis::Y, -pi), pulse(1, 2, k, -th),
            pulse(2, 3, Axis::Y, pi), pulse(0, 1, Axis::Y, pi)};
}

// ---------------------------------------------------------------------------
// Identity verification
// ---------------------------------------------------------------------------

enum class IdentityKind {
    exact,          // composition must match the reference up to global phase
    sign_variant,   // matches except exactly one off-diagonal sign flip
    phase_variant,  // matches times a diagonal phase gate (populations equal)
};

struct IdentityCheck {
    std::string name;
    double theta = 0.0;
    IdentityKind kind = IdentityKind::exact;
    double error = 0.0;
    bool pass = false;
    std::string note;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    double max_exact_error = 0.0;
    bool all_pass = true;
};

namespace detail {

inline bool one_offdiagonal_sign_flip(const Matrix4c& u, const Matrix4c& v, double tol) {
    int flips = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (std::abs(u(i, j) - v(i, j)) <= tol) continue;
            if (i != j && std::abs(u(i, j) + v(i, j)) <= tol)
                ++flips;
            else
                return false;
        }
    return flips == 1;
}

inline bool diagonal_phase_equivalent(const Matrix4c& u, const Matrix4c& v, double tol) {
    const Matrix4c d = u * v.adjoint();
    Matrix4c offdiag = d;
    offdiag.diagonal().setZero();
    if (offdiag.norm() > tol) return false;
    for (int i = 0; i < 4; ++i)
        if (std::abs(std::abs(d(i, i)) - 1.0) > tol) return false;
    return true;
}

inline void check_exact(IdentityReport& rep, const std::string& name, double theta,
                        const Matrix4c& composed, const Matrix4c& reference, double tol) {
    IdentityCheck c;
    c.name = name;
    c.theta = theta;
    c.kind = IdentityKind::exact;
    c.error = phase_distance(composed, reference);
    c.pass = c.error <= tol;
    if (!c.pass) c.note = "exceeds tolerance";
    rep.max_exact_error = std::max(rep.max_exact_error, c.error);
    rep.all_pass = rep.all_pass && c.pass;
    rep.checks.push_back(std::move(c));
}

inline void check_variant(IdentityReport& rep, const std::string& name,
                          const Matrix4c& composed, const Matrix4c& reference, double tol) {
    IdentityCheck c;
    c.name = name;
    c.error = phase_distance(composed, reference);
    if (one_offdiagonal_sign_flip(composed, reference, tol)) {
        c.kind = IdentityKind::sign_variant;
        c.pass = true;
        c.note = "CNOT-like, one sign differs";
    } else if (diagonal_phase_equivalent(composed, reference, tol)) {
        c.kind = IdentityKind::phase_variant;
        c.pass = true;
        c.note = "matches up to a diagonal phase gate";
    } else {
        c.kind = IdentityKind::sign_variant;
        c.pass = false;
        c.note = "does not match any known variant form";
    }
    rep.all_pass = rep.all_pass && c.pass;
    rep.checks.push_back(std::move(c));
}

}  // namespace detail

/// Check every displayed pulse identity (logical rotations for both
/// strategies, Hadamards, CNOT and SWAP variants, multi-quantum
/// replacements) against its tensor-product or matrix reference, over the
/// given angle grid. Failures are reported, never patched.
inline IdentityReport verify_identities(std::span<const double> theta_grid,
                                        double tol = 1e-10) {
    if (theta_grid.empty())
        throw std::invalid_argument("verify_identities: empty angle grid");
    IdentityReport rep;
    const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};

    for (double th : theta_grid) {
        for (Axis ax : axes) {
            const std::string a(1, axis_name(ax));
            detail::check_exact(rep, "qubit-B " + a + " rotation, single-quantum pair", th,
                                compose(logical_rotation(LogicalQubit::B, ax, th)),
                                logical_rotation_matrix(LogicalQubit::B, ax, th), tol);
            detail::check_exact(rep, "qubit-A " + a + " rotation, two-photon pair", th,
                                compose(logical_rotation(LogicalQubit::A, ax, th)),
                                logical_rotation_matrix(LogicalQubit::A, ax, th), tol);
            detail::check_exact(rep, "qubit-A " + a + " rotation, single-photon form", th,
                                compose(logical_rotation(LogicalQubit::A, ax, th,
                                                         RotationStrategy::single_photon)),
                                logical_rotation_matrix(LogicalQubit::A, ax, th), tol);
        }

        // Multi-quantum replacements, both targets, X and Y axes.
        for (Axis ax : {Axis::X, Axis::Y}) {
            const std::string a(1, axis_name(ax));
            for (const Transition& t : all_transitions()) {
                if (t.delta_m() < 2) continue;
                const IdealPulse p{t, ax, th};
                const Matrix4c ref = selective_rotation(t, ax, th);
                const std::string where =
                    std::to_string(t.lo) + std::to_string(t.hi);
                if (t.delta_m() == 3)
                    detail::check_exact(rep, a + where + " without triple-quantum pulses", th,
                                        compose(appendix_replace(p, ReplacementTarget::no_three_photon)),
                                        ref, tol);
                detail::check_exact(rep, a + where + " from single-quantum pulses only", th,
                                    compose(appendix_replace(p, ReplacementTarget::single_photon_only)),
                                    ref, tol);
            }
            // Remaining printed conjugation forms for the (0,3) rotation.
            detail::check_exact(rep, a + "03 via Y02-conjugated (2,3) pulse", th,
                                compose({pulse(0, 2, Axis::Y, -pi), pulse(2, 3, ax, -th),
                                         pulse(0, 2, Axis::Y, pi)}),
                                selective_rotation(Transition{0, 3}, ax, th), tol);
            detail::check_exact(rep, a + "03 via Y01-conjugated (1,3) pulse", th,
                                compose({pulse(0, 1, Axis::Y, -pi), pulse(1, 3, ax, -th),
                                         pulse(0, 1, Axis::Y, pi)}),
                                selective_rotation(Transition{0, 3}, ax, th), tol);
            detail::check_exact(rep, a + "03 via Y23-conjugated (0,2) pulse", th,
                                compose({pulse(2, 3, Axis::Y, -pi), pulse(0, 2, ax, th),
                                         pulse(2, 3, Axis::Y, pi)}),
                                selective_rotation(Transition{0, 3}, ax, th), tol);
            // Second printed forms of the two-photon replacements.
            detail::check_exact(rep, a + "13 via Y12-conjugated (2,3) pulse", th,
                                compose({pulse(1, 2, Axis::Y, -pi), pulse(2, 3, ax, -th),
                                         pulse(1, 2, Axis::Y, pi)}),
                                selective_rotation(Transition{1, 3}, ax, th), tol);
            detail::check_exact(rep, a + "02 via Y01-conjugated (1,2) pulse", th,
                                compose({pulse(0, 1, Axis::Y, -pi), pulse(1, 2, ax, -th),
                                         pulse(0, 1, Axis::Y, pi)}),
                                selective_rotation(Transition{0, 2}, ax, th), tol);
        }
    }

    for (LogicalQubit q : {LogicalQubit::A, LogicalQubit::B})
        for (HadamardVariant v : {HadamardVariant::xy, HadamardVariant::yz}) {
            const std::string name = std::string("hadamard ") +
                                     (q == LogicalQubit::A ? "A" : "B") +
                                     (v == HadamardVariant::xy ? ", XY pulses" : ", YZ pulses");
            detail::check_exact(rep, name, 0.0, compose(hadamard(q, v)),
                                hadamard_matrix(q), tol);
        }

    for (LogicalQubit c : {LogicalQubit::A, LogicalQubit::B}) {
        const std::string who = c == LogicalQubit::A ? "A" : "B";
        detail::check_variant(rep, "Pound-Overhauser CNOT, control " + who,
                              compose(cnot(c, CnotVariant::pound_overhauser_y)),
                              cnot_matrix(c), tol);
        detail::check_variant(rep, "X-pulse CNOT, control " + who,
                              compose(cnot(c, CnotVariant::x_variant)),
                              cnot_matrix(c), tol);
        detail::check_exact(rep, "exact CNOT, control " + who, 0.0,
                            compose(cnot(c, CnotVariant::exact)), cnot_matrix(c), tol);
    }

    detail::check_exact(rep, "SWAP from three exact CNOTs", 0.0,
                        compose(swap_gate(SwapVariant::composed)), swap_matrix(), tol);
    detail::check_variant(rep, "single-pulse SWAP, Y phase",
                          compose(swap_gate(SwapVariant::single_pulse_y)), swap_matrix(), tol);
    detail::check_variant(rep, "single-pulse SWAP, X phase",
                          compose(swap_gate(SwapVariant::single_pulse_x)), swap_matrix(), tol);

    return rep;
}

}  // namespace quartit
