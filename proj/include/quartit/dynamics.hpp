#pragma once

#include <algorithm>
#include <optional>

#include "quartit/stateprep.hpp"
#include "quartit/system.hpp"

namespace quartit {

// Rotating-frame engine. The quadrupole term commutes with Iz, so the frame
// transform at the carrier frequency leaves it static; with the
// rotating-wave approximation the generator is time independent and
// propagation is an exact matrix exponential. The RWA is the one physical
// approximation made here.

/// H/hbar in rad/s for a rectangular drive segment:
///   2 pi [ (carrier - larmor) Iz + dq Q + omega1 (Ix cos phi + Iy sin phi) ]
/// The detuning sign is fixed so that a drive at transition_frequency(sys,t)
/// is resonant with exactly that transition.
inline Matrix4c rotating_hamiltonian(const SpinSystem& sys, const PhysicalPulse& p) {
    p.validate();
    const auto& ops = spin_operators();
    const double detuning = p.carrier_hz - sys.larmor_hz();
    Matrix4c h = detuning * ops.iz + sys.dq_hz * ops.q;
    if (p.omega1_hz > 0.0)
        h += p.omega1_hz * (std::cos(p.phase_rad) * ops.ix + std::sin(p.phase_rad) * ops.iy);
    return 2.0 * pi * h;
}

/// Exact unitary evolution for time t under a static generator (rad/s).
inline Matrix4c propagate(const Matrix4c& h, double t, const Matrix4c& rho) {
    if (t < 0.0) throw std::invalid_argument("propagate: negative time");
    const Matrix4c u = hermitian_propagator(h, t);
    return apply_unitary(u, rho);
}

/// Phenomenological decoherence: Iz-basis dephasing at 1/T2 plus population
/// relaxation toward the polarized equilibrium at 1/T1, Strang-split around
/// exact unitary substeps. Step size follows
///   dt <= min(T2, 1/(2 pi max(omega1, dq, |detuning|))) / 50,
/// small enough that halving it moves the result by well under 1e-6.
inline Matrix4c propagate_decohering(const Matrix4c& h, double t, const Matrix4c& rho,
                                     const SpinSystem& sys, int min_steps = 0) {
    if (t < 0.0) throw std::invalid_argument("propagate_decohering: negative time");
    if (t == 0.0) return rho;
    sys.validate();

    double fmax = sys.dq_hz;
    // Recover drive scale and detuning from the generator itself so callers
    // can pass any rotating-frame Hamiltonian.
    fmax = std::max(fmax, h.norm() / (2.0 * pi * 2.0));
    const double dt_max = std::min(sys.t2_s, 1.0 / (2.0 * pi * std::max(fmax, 1e-9))) / 50.0;
    const int steps =
        std::max({1, min_steps, static_cast<int>(std::ceil(t / dt_max))});
    const double dt = t / steps;

    const Matrix4c u = hermitian_propagator(h, dt);
    const Vector4c eq = initial_polarized_state(sys.pol_step).diagonal();
    const double dephase_half = std::exp(-0.5 * dt / sys.t2_s);
    const double relax_half = std::exp(-0.5 * dt / sys.t1_s);

    auto decay_half = [&](Matrix4c& r) {
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) r(i, j) *= dephase_half;
        for (int i = 0; i < 4; ++i)
            r(i, i) = eq(i) + (r(i, i) - eq(i)) * relax_half;
    };

    Matrix4c state = rho;
    for (int k = 0; k < steps; ++k) {
        decay_half(state);
        state = apply_unitary(u, state);
        decay_half(state);
    }
    return state;
}

// ---------------------------------------------------------------------------
// Traces and spectra
// ---------------------------------------------------------------------------

struct TimeTrace {
    struct Sample {
        double t_s;
        double delta_rxx;  // Ohm
        double mz;         // hbar units
    };
    std::vector<Sample> samples;
};

struct Spectrum {
    struct Sample {
        double frequency_hz;
        double delta_rxx;
    };
    std::vector<Sample> samples;
};

/// Resistance readout: DRxx = kappa (Mz(0) - Mz(t)), positive when the pulse
/// knocks the polarized magnetization down.
struct ReadoutModel {
    double kappa = 1.0;
    double delta_rxx(double mz0, double mzt) const { return kappa * (mz0 - mzt); }
};

namespace detail {

inline void require_increasing(const std::vector<double>& grid, const char* what) {
    for (size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
}

}  // namespace detail

/// Drive at a fixed carrier for each pulse length in tp_grid, starting from
/// the polarized initial state (or rho0 when supplied); record DRxx and Mz.
inline TimeTrace rabi_trace(const SpinSystem& sys, double carrier_hz, double omega1_hz,
                            const std::vector<double>& tp_grid, bool decoherence = false,
                            std::optional<Matrix4c> rho0 = std::nullopt) {
    sys.validate();
    detail::require_increasing(tp_grid, "rabi_trace");
    const Matrix4c initial = rho0.value_or(initial_polarized_state(sys.pol_step));
    const double mz0 = mz(initial);
    const ReadoutModel readout{sys.kappa};
    const Matrix4c h = rotating_hamiltonian(sys, {carrier_hz, omega1_hz, 0.0, 0.0});

    TimeTrace trace;
    trace.samples.reserve(tp_grid.size());
    if (decoherence) {
        Matrix4c state = initial;
        double t_prev = 0.0;
        for (double tp : tp_grid) {
            if (tp < 0.0) throw std::invalid_argument("rabi_trace: negative pulse length");
            state = propagate_decohering(h, tp - t_prev, state, sys);
            t_prev = tp;
            const double m = mz(state);
            trace.samples.push_back({tp, readout.delta_rxx(mz0, m), m});
        }
        return trace;
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
    const Matrix4c v = es.eigenvectors();
    const Matrix4c rho_eig = v.adjoint() * initial * v;
    for (double tp : tp_grid) {
        if (tp < 0.0) throw std::invalid_argument("rabi_trace: negative pulse length");
        Vector4c phases;
        for (int k = 0; k < 4; ++k)
            phases(k) = std::exp(complexd(0.0, -es.eigenvalues()(k) * tp));
        const Matrix4c rho_t =
            v * (phases.asDiagonal() * rho_eig * phases.asDiagonal().toDenseMatrix().adjoint()) *
            v.adjoint();
        const double m = mz(rho_t);
        trace.samples.push_back({tp, readout.delta_rxx(mz0, m), m});
    }
    return trace;
}

/// DRxx after a pulse of length tp, swept over carrier frequency.
inline Spectrum spectrum(const SpinSystem& sys, double omega1_hz, double tp,
                         const std::vector<double>& freq_grid, bool decoherence = false,
                         std::optional<Matrix4c> rho0 = std::nullopt) {
    sys.validate();
    detail::require_increasing(freq_grid, "spectrum");
    if (tp < 0.0) throw std::invalid_argument("spectrum: negative pulse length");
    const Matrix4c initial = rho0.value_or(initial_polarized_state(sys.pol_step));
    const double mz0 = mz(initial);
    const ReadoutModel readout{sys.kappa};

    Spectrum spec;
    spec.samples.reserve(freq_grid.size());
    for (double f : freq_grid) {
        const Matrix4c h = rotating_hamiltonian(sys, {f, omega1_hz, 0.0, tp});
        const Matrix4c rho_t = decoherence ? propagate_decohering(h, tp, initial, sys)
                                           : propagate(h, tp, initial);
        spec.samples.push_back({f, readout.delta_rxx(mz0, mz(rho_t))});
    }
    return spec;
}

/// Frequency grid used for bundled spectra: 201 points spanning
/// larmor +- 3 * (2 dq), covering all five resonance positions.
inline std::vector<double> default_spectrum_grid(const SpinSystem& sys, int points = 201) {
    const double span = 3.0 * 2.0 * sys.dq_hz;
    return linspace(sys.larmor_hz() - span, sys.larmor_hz() + span, points);
}

struct SpectrumMap {
    std::vector<double> frequency_hz;
    std::vector<double> tp_s;
    Eigen::MatrixXd delta_rxx;  // rows: frequency, cols: tp
};

/// Full (frequency, pulse-length) map of DRxx; the coherent-oscillation
/// fan-out plot. Rows follow the frequency grid, columns the tp grid.
inline SpectrumMap spectrum_2d(const SpinSystem& sys, double omega1_hz,
                               const std::vector<double>& tp_grid,
                               const std::vector<double>& freq_grid) {
    sys.validate();
    detail::require_increasing(tp_grid, "spectrum_2d");
    detail::require_increasing(freq_grid, "spectrum_2d");
    const Matrix4c initial = initial_polarized_state(sys.pol_step);
    const double mz0 = mz(initial);
    const ReadoutModel readout{sys.kappa};

    SpectrumMap map;
    map.frequency_hz = freq_grid;
    map.tp_s = tp_grid;
    map.delta_rxx.resize(static_cast<Eigen::Index>(freq_grid.size()),
                         static_cast<Eigen::Index>(tp_grid.size()));
    for (size_t fi = 0; fi < freq_grid.size(); ++fi) {
        const Matrix4c h = rotating_hamiltonian(sys, {freq_grid[fi], omega1_hz, 0.0, 0.0});
        Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
        const Matrix4c v = es.eigenvectors();
        const Matrix4c rho_eig = v.adjoint() * initial * v;
        for (size_t ti = 0; ti < tp_grid.size(); ++ti) {
            Vector4c phases;
            for (int k = 0; k < 4; ++k)
                phases(k) = std::exp(complexd(0.0, -es.eigenvalues()(k) * tp_grid[ti]));
            const Matrix4c rho_t = v *
                                   (phases.asDiagonal() * rho_eig *
                                    phases.asDiagonal().toDenseMatrix().adjoint()) *
                                   v.adjoint();
            map.delta_rxx(static_cast<Eigen::Index>(fi), static_cast<Eigen::Index>(ti)) =
                readout.delta_rxx(mz0, mz(rho_t));
        }
    }
    return map;
}

// ---------------------------------------------------------------------------
// Rabi-rate calibration
// ---------------------------------------------------------------------------

/// Leading-order estimate of the population-oscillation frequency (Hz) for
/// a resonant drive of amplitude omega1 on transition t. Single quantum:
/// twice the drive times the Ix matrix element. Multi-quantum rates follow
/// the perturbative omega1^2 / dq and omega1^3 / dq^2 scalings.
inline double estimated_rabi_frequency(const SpinSystem& sys, Transition t, double omega1_hz) {
    const double matel = std::abs(spin_operators().ix(t.lo, t.hi));
    if (t.delta_m() == 1) return 2.0 * omega1_hz * matel;
    const double dq = std::max(sys.dq_hz, std::max(omega1_hz, 1e-12));
    if (t.delta_m() == 2) return std::sqrt(3.0) * omega1_hz * omega1_hz / dq;
    return (3.0 / 8.0) * omega1_hz * omega1_hz * omega1_hz / (dq * dq);
}

/// Numerically calibrated Rabi frequency: drive t at resonance from |lo>,
/// locate the first maximum of the |hi> population, return 1/(2 t_max).
/// Convention: a pulse of length theta / (2 pi rabi) rotates by theta.
inline double measured_rabi_frequency(const SpinSystem& sys, Transition t, double omega1_hz) {
    sys.validate();
    if (!(omega1_hz > 0.0))
        throw std::invalid_argument("measured_rabi_frequency: omega1 must be > 0");

    const double carrier = transition_frequency(sys, t);
    const Matrix4c h = rotating_hamiltonian(sys, {carrier, omega1_hz, 0.0, 0.0});
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
    // Transfer amplitude <hi|U(t)|lo> = sum_k c_k exp(-i lambda_k t)
    Vector4c coeffs;
    for (int k = 0; k < 4; ++k)
        coeffs(k) = es.eigenvectors()(t.hi, k) * std::conj(es.eigenvectors()(t.lo, k));
    auto population = [&](double time) {
        complexd amp = 0.0;
        for (int k = 0; k < 4; ++k)
            amp += coeffs(k) * std::exp(complexd(0.0, -es.eigenvalues()(k) * time));
        return std::norm(amp);
    };

    const double est = estimated_rabi_frequency(sys, t, omega1_hz);
    const double horizon_limit = 10.0 / est;
    double horizon = 1.2 / est;
    const int coarse_points = 3001;

    while (true) {
        const auto grid = linspace(0.0, horizon, coarse_points);
        std::vector<double> p(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) p[i] = population(grid[i]);
        const double pmax = *std::max_element(p.begin(), p.end());

        int peak = -1;
        if (pmax > 1e-9) {
            for (size_t i = 1; i + 1 < p.size(); ++i) {
                if (p[i] >= p[i - 1] && p[i] >= p[i + 1] && p[i] >= 0.9 * pmax) {
                    peak = static_cast<int>(i);
                    break;
                }
            }
        }
        if (peak < 0) {
            if (horizon >= horizon_limit)
                throw NumericalError("measured_rabi_frequency: no population-transfer "
                                     "maximum found within the search horizon");
            horizon = std::min(2.0 * horizon, horizon_limit);
            continue;
        }

        // Dense rescan around the coarse peak, then a parabolic refinement.
        const double lo_t = grid[static_cast<size_t>(peak) - 1];
        const double hi_t = grid[static_cast<size_t>(peak) + 1];
        const auto fine = linspace(lo_t, hi_t, 4001);
        size_t best = 0;
        double best_p = -1.0;
        for (size_t i = 0; i < fine.size(); ++i) {
            const double pv = population(fine[i]);
            if (pv > best_p) {
                best_p = pv;
                best = i;
            }
        }
        double t_max = fine[best];
        if (best > 0 && best + 1 < fine.size()) {
            const double ym = population(fine[best - 1]);
            const double yp = population(fine[best + 1]);
            const double denom = ym - 2.0 * best_p + yp;
            if (std::abs(denom) > 1e-300) {
                const double shift = 0.5 * (ym - yp) / denom;
                const double step = fine[1] - fine[0];
                t_max += std::clamp(shift, -1.0, 1.0) * step;
            }
        }
        if (!(t_max > 0.0))
            throw NumericalError("measured_rabi_frequency: degenerate maximum at t = 0");
        return 1.0 / (2.0 * t_max);
    }
}

// ---------------------------------------------------------------------------
// Dipole geometry
// ---------------------------------------------------------------------------

/// Secular dipole coupling geometry factor |r|^-3 (3 cos^2 theta - 1) with
/// theta the angle between the internuclear vector and the static field.
/// Vanishes at the magic angle, which is why nearest-neighbor As-Ga pairs
/// on a (100)-grown lattice contribute so little dephasing.
inline double dipole_coupling_factor(const Vector3d& r, const Vector3d& b0_dir) {
    const double rn = r.norm();
    if (!(rn > 0.0)) throw std::invalid_argument("dipole_coupling_factor: zero separation");
    const double bn = b0_dir.norm();
    if (!(bn > 0.0)) throw std::invalid_argument("dipole_coupling_factor: zero field direction");
    const double cos_theta = r.dot(b0_dir) / (rn * bn);
    return (3.0 * cos_theta * cos_theta - 1.0) / (rn * rn * rn);
}

}  // namespace quartit
