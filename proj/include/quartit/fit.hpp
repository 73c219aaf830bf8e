#pragma once

#include <cmath>

#include "quartit/dynamics.hpp"

namespace quartit {

/// Parameters of the damped coherent oscillation
///   y(t) = A [1 - cos(omega_r t) exp(-t / t2)].
struct DampedRabiFit {
    double amplitude = 0.0;
    double omega_r = 0.0;      // rad/s
    double t2 = 0.0;           // s
    double residual_rms = 0.0;
    int iterations = 0;
};

namespace detail {

/// Periodogram by direct DFT on the demeaned samples; returns the angular
/// frequency of the strongest bin and its power relative to the median.
struct PeriodogramPeak {
    double omega;
    double power;
    double median_power;
};

inline PeriodogramPeak periodogram_peak(const std::vector<double>& t,
                                        const std::vector<double>& y) {
    const size_t n = t.size();
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);

    const double span = t.back() - t.front();
    const size_t nfreq = std::max<size_t>(64, 4 * n);
    std::vector<double> power(nfreq);
    double dt_min = span;
    for (size_t i = 1; i < n; ++i) dt_min = std::min(dt_min, t[i] - t[i - 1]);
    const double omega_max = pi / dt_min;            // Nyquist-like bound
    const double omega_min = 2.0 * pi / (4.0 * span);  // down to a quarter cycle

    size_t best = 0;
    for (size_t k = 0; k < nfreq; ++k) {
        const double w = omega_min + (omega_max - omega_min) *
                                         static_cast<double>(k) /
                                         static_cast<double>(nfreq - 1);
        complexd acc = 0.0;
        for (size_t i = 0; i < n; ++i)
            acc += (y[i] - mean) * std::exp(complexd(0.0, -w * t[i]));
        power[k] = std::norm(acc);
        if (power[k] > power[best]) best = k;
    }
    std::vector<double> sorted = power;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(nfreq / 2),
                     sorted.end());
    const double median = sorted[nfreq / 2];
    const double w_best = omega_min + (omega_max - omega_min) *
                                          static_cast<double>(best) /
                                          static_cast<double>(nfreq - 1);
    return {w_best, power[best], median};
}

}  // namespace detail

/// Nonlinear least squares for the damped-oscillation model, initialized
/// from the periodogram peak (frequency) and the log envelope of the
/// oscillation extrema (decay). Throws NumericalError when the trace shows
/// no oscillation above the noise floor.
inline DampedRabiFit fit_damped_rabi(const TimeTrace& trace) {
    const size_t n = trace.samples.size();
    if (n < 10)
        throw std::invalid_argument("fit_damped_rabi: need at least 10 samples");
    std::vector<double> t(n), y(n);
    for (size_t i = 0; i < n; ++i) {
        t[i] = trace.samples[i].t_s;
        y[i] = trace.samples[i].delta_rxx;
        if (i > 0 && !(t[i] > t[i - 1]))
            throw std::invalid_argument("fit_damped_rabi: times must be increasing");
    }

    double ymin = y[0], ymax = y[0];
    for (double v : y) {
        ymin = std::min(ymin, v);
        ymax = std::max(ymax, v);
    }
    if (ymax - ymin < 1e-300)
        throw NumericalError("fit_damped_rabi: no oscillation detected (constant trace)");

    const auto peak = detail::periodogram_peak(t, y);
    if (peak.power < 5.0 * std::max(peak.median_power, 1e-300))
        throw NumericalError("fit_damped_rabi: no oscillation detected "
                             "(no spectral peak above the noise floor)");
    const double span = t.back() - t.front();
    if (span * peak.omega < 2.0 * pi)
        throw std::invalid_argument("fit_damped_rabi: samples span less than one period");

    // Initial values: amplitude from the mean, decay from the envelope of
    // |y - mean| at its local maxima.
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double a0 = mean;
    if (std::abs(a0) < 1e-300) a0 = 0.5 * (ymax - ymin);

    std::vector<double> ext_t, ext_log;
    for (size_t i = 1; i + 1 < n; ++i) {
        const double d = std::abs(y[i] - a0);
        if (d >= std::abs(y[i - 1] - a0) && d >= std::abs(y[i + 1] - a0) && d > 1e-12 * std::abs(a0))
            ext_t.push_back(t[i]), ext_log.push_back(std::log(d));
    }
    double gamma0 = 0.0;  // 1 / T2
    if (ext_t.size() >= 2) {
        double st = 0, sl = 0, stt = 0, stl = 0;
        for (size_t i = 0; i < ext_t.size(); ++i) {
            st += ext_t[i];
            sl += ext_log[i];
            stt += ext_t[i] * ext_t[i];
            stl += ext_t[i] * ext_log[i];
        }
        const double m = static_cast<double>(ext_t.size());
        const double denom = m * stt - st * st;
        if (std::abs(denom) > 1e-300) gamma0 = -(m * stl - st * sl) / denom;
    }
    gamma0 = std::clamp(gamma0, 0.0, 100.0 / span);

    // Levenberg-Marquardt on (A, omega, gamma).
    double A = a0, w = peak.omega, g = gamma0;
    double lambda = 1e-3;
    auto cost = [&](double A_, double w_, double g_) {
        double c = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double model = A_ * (1.0 - std::cos(w_ * t[i]) * std::exp(-g_ * t[i]));
            c += (model - y[i]) * (model - y[i]);
        }
        return c;
    };
    double current = cost(A, w, g);
    int iter = 0;
    for (; iter < 400; ++iter) {
        Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
        Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
        for (size_t i = 0; i < n; ++i) {
            const double e = std::exp(-g * t[i]);
            const double cw = std::cos(w * t[i]);
            const double sw = std::sin(w * t[i]);
            const double r = A * (1.0 - cw * e) - y[i];
            Eigen::Vector3d jac;
            jac(0) = 1.0 - cw * e;           // d/dA
            jac(1) = A * t[i] * sw * e;      // d/domega
            jac(2) = A * t[i] * cw * e;      // d/dgamma
            jtj += jac * jac.transpose();
            jtr += jac * r;
        }
        Eigen::Matrix3d damped = jtj;
        damped.diagonal() += lambda * jtj.diagonal();
        const Eigen::Vector3d step = damped.ldlt().solve(jtr);
        const double A_new = A - step(0);
        const double w_new = w - step(1);
        const double g_new = std::max(0.0, g - step(2));
        const double next = cost(A_new, w_new, g_new);
        if (next < current) {
            const double rel = (current - next) / std::max(current, 1e-300);
            A = A_new;
            w = w_new;
            g = g_new;
            current = next;
            lambda = std::max(lambda / 3.0, 1e-12);
            if (rel < 1e-14) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }

    DampedRabiFit fit;
    fit.amplitude = A;
    fit.omega_r = std::abs(w);
    fit.t2 = g > 1e-300 ? 1.0 / g : std::numeric_limits<double>::infinity();
    fit.residual_rms = std::sqrt(current / static_cast<double>(n));
    fit.iterations = iter;
    return fit;
}

}  // namespace quartit
