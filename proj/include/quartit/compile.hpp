#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>

#include "quartit/dynamics.hpp"
#include "quartit/program.hpp"
#include "quartit/stateprep.hpp"

namespace quartit {

// Maps parsed programs onto time-ordered physical drive segments for a
// concrete spin system. X/Y rotations become resonant pulses (phase 0 for X,
// pi/2 for Y; negative angles flip the phase by pi). Z rotations carry no
// drive at all: they are exact frame bookkeeping, emitted as zero-duration
// entries so verification can apply them as diagonal unitaries. Free
// evolution during pulses and gaps is NOT auto-compensated; WAIT and RZ are
// the knobs left to the user.

enum class ScheduleEntryKind { drive, virtual_z, wait };

struct ScheduledPulse {
    ScheduleEntryKind kind = ScheduleEntryKind::drive;
    PhysicalPulse pulse;
    std::optional<IdealPulse> ideal;
    int source_line = 0;
    std::string source_text;
    std::string note;
};

struct PulseSchedule {
    SpinSystem system;
    std::string program_hash;
    std::vector<ScheduledPulse> pulses;
    Matrix4c ideal_unitary = Matrix4c::Identity();  // composed intent, waits excluded
};

struct CompileOptions {
    RotationStrategy strategy = RotationStrategy::two_photon;
    bool avoid_three_photon = false;
    double omega1_hz = 0.0;  // 0 = pick dq/10 (or 1 kHz when dq = 0)
    PrepVariant prep_variant = PrepVariant::single_quantum_path;
};

/// Population-oscillation frequency (Hz) used to convert angles into
/// durations. Single-quantum rates are analytic; multi-quantum rates come
/// from numeric calibration against the dynamics engine, which is the one
/// source of truth for the convention: duration = theta / (2 pi rabi).
inline double rabi_frequency(const SpinSystem& sys, Transition t, double omega1_hz) {
    if (!(omega1_hz > 0.0))
        throw std::invalid_argument("rabi_frequency: omega1 must be > 0");
    if (t.delta_m() == 1)
        return 2.0 * omega1_hz * std::abs(spin_operators().ix(t.lo, t.hi));
    return measured_rabi_frequency(sys, t, omega1_hz);
}

inline uint64_t fnv1a64(std::string_view data) {
    uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

inline std::string program_hash(std::string_view source) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(source)));
    return buf;
}

namespace detail {

inline PulseSequence expand_statement(const Statement& stmt, const CompileOptions& opt) {
    return std::visit(
        [&](const auto& st) -> PulseSequence {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, HadamardStmt>) {
                return hadamard(st.qubit);
            } else if constexpr (std::is_same_v<T, CnotStmt>) {
                return cnot(st.control);
            } else if constexpr (std::is_same_v<T, RotationStmt>) {
                return logical_rotation(st.qubit, st.axis, st.angle_deg * pi / 180.0,
                                        opt.strategy);
            } else if constexpr (std::is_same_v<T, SwapStmt>) {
                return swap_gate(SwapVariant::single_pulse_y);
            } else if constexpr (std::is_same_v<T, RawPulseStmt>) {
                return {IdealPulse{Transition{st.lo, st.hi}, st.axis,
                                   st.angle_deg * pi / 180.0}};
            } else if constexpr (std::is_same_v<T, PrepStmt>) {
                return prep_sequence(st.target, opt.prep_variant);
            } else {
                return {};  // WAIT handled by the caller
            }
        },
        stmt);
}

}  // namespace detail

inline PulseSchedule compile(const GateProgram& prog, const SpinSystem& sys,
                             const CompileOptions& options = {}) {
    sys.validate();
    const double omega1 =
        options.omega1_hz > 0.0 ? options.omega1_hz
                                : (sys.dq_hz > 0.0 ? sys.dq_hz / 10.0 : 1.0e3);

    PulseSchedule sched;
    sched.system = sys;
    sched.program_hash = program_hash(render_program(prog));

    for (const auto& sourced : prog.statements) {
        if (const auto* wait = std::get_if<WaitStmt>(&sourced.stmt)) {
            ScheduledPulse entry;
            entry.kind = ScheduleEntryKind::wait;
            entry.pulse = {sys.larmor_hz(), 0.0, 0.0, wait->seconds};
            entry.source_line = sourced.line;
            entry.source_text = sourced.text;
            sched.pulses.push_back(std::move(entry));
            continue;
        }

        PulseSequence ideal = detail::expand_statement(sourced.stmt, options);
        PulseSequence routed;
        std::vector<std::string> notes;
        for (const auto& p : ideal) {
            if (options.avoid_three_photon && p.transition.delta_m() == 3 &&
                p.axis != Axis::Z) {
                const auto target = options.strategy == RotationStrategy::single_photon
                                        ? ReplacementTarget::single_photon_only
                                        : ReplacementTarget::no_three_photon;
                for (const auto& rp : appendix_replace(p, target)) {
                    routed.push_back(rp);
                    notes.push_back("replaced triple-quantum pulse by conjugated "
                                    "lower-order pulses");
                }
            } else {
                routed.push_back(p);
                notes.emplace_back();
            }
        }

        for (size_t i = 0; i < routed.size(); ++i) {
            const IdealPulse& p = routed[i];
            ScheduledPulse entry;
            entry.ideal = p;
            entry.source_line = sourced.line;
            entry.source_text = sourced.text;
            entry.note = notes[i];
            if (p.axis == Axis::Z) {
                entry.kind = ScheduleEntryKind::virtual_z;
                entry.pulse = {transition_frequency(sys, p.transition), 0.0, 0.0, 0.0};
            } else {
                entry.kind = ScheduleEntryKind::drive;
                const double rabi = rabi_frequency(sys, p.transition, omega1);
                const double base_phase = p.axis == Axis::X ? 0.0 : pi / 2.0;
                entry.pulse.carrier_hz = transition_frequency(sys, p.transition);
                entry.pulse.omega1_hz = omega1;
                entry.pulse.phase_rad = base_phase + (p.theta < 0.0 ? pi : 0.0);
                entry.pulse.duration_s = std::abs(p.theta) / (2.0 * pi * rabi);
            }
            sched.ideal_unitary =
                selective_rotation(p.transition, p.axis, p.theta) * sched.ideal_unitary;
            sched.pulses.push_back(std::move(entry));
        }
    }
    return sched;
}

inline nlohmann::json schedule_to_json_value(const PulseSchedule& sched) {
    nlohmann::json j;
    j["system"] = {
        {"nuclide", sched.system.nuclide},
        {"f0_hz", sched.system.f0_hz},
        {"dq_hz", sched.system.dq_hz},
        {"knight_hz", sched.system.knight_hz},
        {"electrons_present", sched.system.electrons_present},
        {"t1_s", sched.system.t1_s},
        {"t2_s", sched.system.t2_s},
        {"kappa", sched.system.kappa},
        {"pol_step_d", sched.system.pol_step},
    };
    j["program_hash"] = sched.program_hash;
    j["pulses"] = nlohmann::json::array();
    int index = 0;
    for (const auto& e : sched.pulses) {
        nlohmann::json p;
        p["index"] = index++;
        p["carrier_hz"] = e.pulse.carrier_hz;
        p["rabi_hz"] = e.pulse.omega1_hz;
        p["phase_rad"] = e.pulse.phase_rad;
        p["duration_s"] = e.pulse.duration_s;
        p["source_line"] = e.source_line;
        if (e.ideal) {
            p["ideal"] = {
                {"transition", {e.ideal->transition.lo, e.ideal->transition.hi}},
                {"axis", std::string(1, axis_name(e.ideal->axis))},
                {"theta_rad", e.ideal->theta},
            };
        } else {
            p["ideal"] = nullptr;
        }
        if (!e.note.empty()) p["note"] = e.note;
        j["pulses"].push_back(std::move(p));
    }
    return j;
}

inline std::string schedule_to_json(const PulseSchedule& sched, int indent = 2) {
    return schedule_to_json_value(sched).dump(indent);
}

/// Propagate a state through a schedule. Each drive segment evolves in its
/// own rotating frame; virtual-Z entries apply their exact diagonal
/// unitary; waits evolve freely under the quadrupole term (Larmor frame).
inline Matrix4c simulate_schedule(const PulseSchedule& sched, const Matrix4c& rho0,
                                  bool decoherence = false) {
    Matrix4c state = rho0;
    for (const auto& e : sched.pulses) {
        switch (e.kind) {
            case ScheduleEntryKind::virtual_z:
                state = apply_unitary(
                    selective_rotation(e.ideal->transition, Axis::Z, e.ideal->theta), state);
                break;
            case ScheduleEntryKind::wait:
            case ScheduleEntryKind::drive: {
                const Matrix4c h = rotating_hamiltonian(sched.system, e.pulse);
                state = decoherence
                            ? propagate_decohering(h, e.pulse.duration_s, state, sched.system)
                            : propagate(h, e.pulse.duration_s, state);
                break;
            }
        }
    }
    return state;
}

// ---------------------------------------------------------------------------
// Degenerate-drive search
// ---------------------------------------------------------------------------

/// Drive parameters realizing a (0,3) rotation at the Larmor frequency while
/// the degenerate (1,2) transition completes whole Rabi cycles and returns
/// to where it started.
struct DegenerateDrive {
    double omega1_hz = 0.0;
    double duration_s = 0.0;
    double transfer_error = 0.0;      // | |U30|^2 - sin^2(theta/2) |
    double spectator_fidelity = 1.0;  // min(|U11|^2, |U22|^2)
};

namespace detail {

struct DegenerateObjective {
    Eigen::SelfAdjointEigenSolver<Matrix4c> es;
    double target_transfer;
    // spectral coefficients of the three matrix elements we track
    Vector4c c30, c11, c22;

    DegenerateObjective(const SpinSystem& sys, double omega1, double target)
        : es(rotating_hamiltonian(sys, {sys.larmor_hz(), omega1, 0.0, 0.0})),
          target_transfer(target) {
        const Matrix4c& v = es.eigenvectors();
        for (int k = 0; k < 4; ++k) {
            c30(k) = v(3, k) * std::conj(v(0, k));
            c11(k) = v(1, k) * std::conj(v(1, k));
            c22(k) = v(2, k) * std::conj(v(2, k));
        }
    }

    Matrix4c unitary(double t) const {
        Vector4c phases;
        for (int k = 0; k < 4; ++k)
            phases(k) = std::exp(complexd(0.0, -es.eigenvalues()(k) * t));
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }

    double loss(double t) const {
        complexd u30 = 0.0, u11 = 0.0, u22 = 0.0;
        for (int k = 0; k < 4; ++k) {
            const complexd ph = std::exp(complexd(0.0, -es.eigenvalues()(k) * t));
            u30 += c30(k) * ph;
            u11 += c11(k) * ph;
            u22 += c22(k) * ph;
        }
        const double dt_ = std::norm(u30) - target_transfer;
        const double m1 = 1.0 - std::norm(u11);
        const double m2 = 1.0 - std::norm(u22);
        return dt_ * dt_ + m1 * m1 + m2 * m2;
    }
};

}  // namespace detail

/// Grid search over drive amplitude and duration, refined by coordinate
/// descent. Succeeds when the (1,2) pair returns with fidelity >= 1 - 1e-4
/// and the (0,3) transfer matches sin^2(theta/2) to 1e-3. Amplitudes are
/// capped at 10 dq: beyond that the drive is dismissed as unrealistic.
inline DegenerateDrive degenerate_drive_search(const SpinSystem& sys, double theta03,
                                               double spectator_tol = 1e-4,
                                               double transfer_tol = 1e-3) {
    sys.validate();
    if (theta03 < 0.0 || theta03 >= 2.0 * pi)
        throw std::invalid_argument("degenerate_drive_search: theta03 must be in [0, 2 pi)");
    if (theta03 == 0.0) return {0.0, 0.0, 0.0, 1.0};
    if (!(sys.dq_hz > 0.0))
        throw std::invalid_argument("degenerate_drive_search: needs a quadrupole splitting");

    const double dq = sys.dq_hz;
    const double target = std::sin(theta03 / 2.0) * std::sin(theta03 / 2.0);

    struct Candidate {
        double omega1, t, loss;
    };
    std::vector<Candidate> seeds;

    const int n_omega = 160;
    for (int i = 0; i < n_omega; ++i) {
        const double omega1 =
            0.2 * dq * std::pow(10.0 * dq / (0.2 * dq), i / static_cast<double>(n_omega - 1));
        detail::DegenerateObjective obj(sys, omega1, target);
        const double rate_est = std::min((3.0 / 8.0) * omega1 * omega1 * omega1 / (dq * dq),
                                         2.0 * omega1);
        const double horizon = 1.5 / rate_est;
        const int points = std::clamp(static_cast<int>(horizon * 60.0 * 2.0 * omega1), 1500, 24000);
        Candidate best{omega1, 0.0, 1e300};
        for (int k = 1; k <= points; ++k) {
            const double t = horizon * k / points;
            const double l = obj.loss(t);
            if (l < best.loss) best = {omega1, t, l};
        }
        seeds.push_back(best);
    }
    std::sort(seeds.begin(), seeds.end(),
              [](const Candidate& a, const Candidate& b) { return a.loss < b.loss; });
    seeds.resize(std::min<size_t>(seeds.size(), 8));

    DegenerateDrive best_result;
    double best_loss = 1e300;
    for (const auto& seed : seeds) {
        // Coordinate descent: shrink bracketed scans alternately in t and omega1.
        double omega1 = seed.omega1, t = seed.t;
        double dw = omega1 * 0.02, dt_ = t * 0.02;
        double current = detail::DegenerateObjective(sys, omega1, target).loss(t);
        for (int round = 0; round < 60 && (dw / omega1 > 1e-12 || dt_ / t > 1e-12); ++round) {
            {
                detail::DegenerateObjective obj(sys, omega1, target);
                for (int k = -8; k <= 8; ++k) {
                    const double tt = t + k * dt_ / 8.0;
                    if (tt <= 0.0) continue;
                    const double l = obj.loss(tt);
                    if (l < current) {
                        current = l;
                        t = tt;
                    }
                }
            }
            for (int k = -8; k <= 8; ++k) {
                const double ww = omega1 + k * dw / 8.0;
                if (ww <= 0.0 || ww > 10.0 * dq) continue;
                const double l = detail::DegenerateObjective(sys, ww, target).loss(t);
                if (l < current) {
                    current = l;
                    omega1 = ww;
                }
            }
            dw *= 0.5;
            dt_ *= 0.5;
        }
        if (current < best_loss) {
            detail::DegenerateObjective obj(sys, omega1, target);
            const Matrix4c u = obj.unitary(t);
            best_loss = current;
            best_result.omega1_hz = omega1;
            best_result.duration_s = t;
            best_result.transfer_error = std::abs(std::norm(u(3, 0)) - target);
            best_result.spectator_fidelity = std::min(std::norm(u(1, 1)), std::norm(u(2, 2)));
        }
    }

    if (best_result.spectator_fidelity < 1.0 - spectator_tol ||
        best_result.transfer_error > transfer_tol)
        throw NumericalError("degenerate_drive_search: no drive below 10 dq reaches the "
                             "requested rotation; the operation requires unrealistic drive");
    return best_result;
}

}  // namespace quartit
