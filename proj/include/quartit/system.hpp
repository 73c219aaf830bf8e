#pragma once

#include <string>

#include "quartit/spin.hpp"

namespace quartit {

/// Nuclide and readout parameters of one spin-3/2 species in the device.
/// f0 is the Larmor frequency (omega0/2pi), dq the quadrupole shift
/// (Delta_q/h). The Knight shift applies only while conduction electrons
/// are present; depleting them ("decoupling") removes it and lengthens T2.
struct SpinSystem {
    std::string nuclide = "75As";
    double f0_hz = 0.0;
    double dq_hz = 0.0;
    double knight_hz = 0.0;
    bool electrons_present = false;
    double t1_s = 100.0;
    double t2_s = 1.5e-3;
    double kappa = 1.0;      // readout gain, Ohm per hbar of Mz
    double pol_step = 0.1;   // initial polarization population increment d

    void validate() const {
        if (!(f0_hz > 0.0)) throw std::invalid_argument("SpinSystem: f0_hz must be > 0");
        if (dq_hz < 0.0) throw std::invalid_argument("SpinSystem: dq_hz must be >= 0");
        if (!(t2_s > 0.0) || t1_s < t2_s)
            throw std::invalid_argument("SpinSystem: need t1_s >= t2_s > 0");
        if (pol_step < 0.0 || pol_step > 1.0 / 6.0)
            throw std::invalid_argument("SpinSystem: pol_step outside [0, 1/6]");
        if (!(kappa > 0.0)) throw std::invalid_argument("SpinSystem: kappa must be > 0");
    }

    /// Effective Larmor frequency including the Knight shift when electrons
    /// are present.
    double larmor_hz() const { return f0_hz + (electrons_present ? knight_hz : 0.0); }
};

/// Per-photon carrier frequency of a transition. With level energies
/// E(i)/h = -larmor * m(i) + dq * q(i), the single-quantum lines sit at
/// larmor and larmor +- 2 dq, the two-photon lines at larmor +- dq, and the
/// three-photon line at larmor (quadrupole shifts cancel over delta_m = 3).
inline double transition_frequency(const SpinSystem& sys, Transition t) {
    const double fl = sys.larmor_hz();
    auto energy = [&](int i) {
        const double q = (i == 0 || i == 3) ? 1.0 : -1.0;
        return -fl * level_m(i) + sys.dq_hz * q;
    };
    return (energy(t.hi) - energy(t.lo)) / t.delta_m();
}

/// 69Ga profile: 15 kHz quadrupolar splitting between adjacent
/// single-quantum lines (2 dq = 15 kHz), 9 kHz Knight shift, T2 of 0.6 ms
/// with electrons present and 1.5 ms decoupled. The Larmor frequency is a
/// device calibration and must be supplied.
inline SpinSystem ga69_profile(double f0_hz, bool electron_decoupled = false) {
    SpinSystem sys;
    sys.nuclide = "69Ga";
    sys.f0_hz = f0_hz;
    sys.dq_hz = 7.5e3;
    sys.knight_hz = 9.0e3;
    sys.electrons_present = !electron_decoupled;
    sys.t1_s = 100.0;
    sys.t2_s = electron_decoupled ? 1.5e-3 : 0.6e-3;
    sys.validate();
    return sys;
}

/// 75As profile; the quadrupole shift depends on local strain, so it is a
/// parameter here.
inline SpinSystem as75_profile(double f0_hz, double dq_hz, bool electron_decoupled = false) {
    SpinSystem sys;
    sys.nuclide = "75As";
    sys.f0_hz = f0_hz;
    sys.dq_hz = dq_hz;
    sys.knight_hz = 9.0e3;
    sys.electrons_present = !electron_decoupled;
    sys.t1_s = 100.0;
    sys.t2_s = electron_decoupled ? 1.5e-3 : 0.6e-3;
    sys.validate();
    return sys;
}

/// A rectangular drive segment as delivered to the antenna: carrier
/// frequency, drive amplitude omega1/2pi (proportional to B1), phase and
/// duration. Zero-amplitude segments represent waits; zero-duration
/// segments carry virtual frame rotations.
struct PhysicalPulse {
    double carrier_hz = 0.0;
    double omega1_hz = 0.0;
    double phase_rad = 0.0;
    double duration_s = 0.0;

    void validate() const {
        if (duration_s < 0.0 || omega1_hz < 0.0)
            throw std::invalid_argument("PhysicalPulse: negative duration or amplitude");
    }
};

}  // namespace quartit
