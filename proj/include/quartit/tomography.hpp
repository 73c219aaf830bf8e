#pragma once

#include <nlohmann/json.hpp>

#include "quartit/compile.hpp"

namespace quartit {

// Mz-detection tomography. A single readout yields the three subtracted
// populations (rho11 - rho00, rho22 - rho11, rho33 - rho22); rotating the
// state before readout moves every other matrix element into those three
// slots. Twelve pi/2 rotations (X and Y on each of the six transitions) plus
// the bare readout overdetermine the 15 free real parameters; reconstruction
// is a linear least-squares solve.

struct TomographySetting {
    std::string label;  // "identity", "X01", "Y01", ..., "Y03"
    Matrix4c rotation;
};

/// The 12 tomography rotations: X and Y pi/2 pulses on every transition,
/// single through triple quantum.
inline std::vector<TomographySetting> tomography_rotations() {
    std::vector<TomographySetting> out;
    for (const Transition& t : all_transitions())
        for (Axis ax : {Axis::X, Axis::Y}) {
            TomographySetting s;
            s.label = std::string(1, axis_name(ax)) + std::to_string(t.lo) +
                      std::to_string(t.hi);
            s.rotation = selective_rotation(t, ax, pi / 2.0);
            out.push_back(std::move(s));
        }
    return out;
}

/// Identity plus the 12 rotations; the full measurement schedule.
inline std::vector<TomographySetting> tomography_settings() {
    std::vector<TomographySetting> out = {{"identity", Matrix4c::Identity()}};
    auto rots = tomography_rotations();
    out.insert(out.end(), rots.begin(), rots.end());
    return out;
}

/// Adjacent diagonal differences of the rotated state, in level order.
inline Eigen::Vector3d readout_signals(const Matrix4c& rho, const Matrix4c& rotation) {
    const Matrix4c rotated = apply_unitary(rotation, rho);
    Eigen::Vector3d s;
    for (int i = 0; i < 3; ++i)
        s(i) = (rotated(i + 1, i + 1) - rotated(i, i)).real();
    return s;
}

struct TomographyRecord {
    std::string setting_label;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
};

inline std::vector<TomographyRecord> simulate_records(const Matrix4c& rho) {
    std::vector<TomographyRecord> records;
    for (const auto& setting : tomography_settings()) {
        const Eigen::Vector3d s = readout_signals(rho, setting.rotation);
        records.push_back({setting.label, s(0), s(1), s(2)});
    }
    return records;
}

// Real parameterization of a unit-trace Hermitian 4x4 matrix, 15 numbers:
// three adjacent diagonal differences, six real and six imaginary
// off-diagonal parts (upper triangle, row-major order 01,02,03,12,13,23).
namespace detail {

inline std::array<Matrix4c, 15> parameter_basis() {
    std::array<Matrix4c, 15> basis;
    // Diagonal-difference directions at fixed unit trace.
    const double diag_dirs[3][4] = {
        {-0.75, 0.25, 0.25, 0.25},
        {-0.5, -0.5, 0.5, 0.5},
        {-0.25, -0.25, -0.25, 0.75},
    };
    for (int d = 0; d < 3; ++d) {
        basis[static_cast<size_t>(d)].setZero();
        for (int i = 0; i < 4; ++i) basis[static_cast<size_t>(d)](i, i) = diag_dirs[d][i];
    }
    int idx = 3;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Matrix4c re = Matrix4c::Zero();
            re(i, j) = 1.0;
            re(j, i) = 1.0;
            basis[static_cast<size_t>(idx)] = re;
            Matrix4c im = Matrix4c::Zero();
            im(i, j) = imag_unit;
            im(j, i) = -imag_unit;
            basis[static_cast<size_t>(idx + 6)] = im;
            ++idx;
        }
    return basis;
}

inline std::vector<std::string> parameter_labels() {
    std::vector<std::string> labels = {"d10", "d21", "d32"};
    const char* pairs[6] = {"01", "02", "03", "12", "13", "23"};
    for (const char* p : pairs) labels.push_back(std::string("re") + p);
    for (const char* p : pairs) labels.push_back(std::string("im") + p);
    return labels;
}

}  // namespace detail

/// The 39 x 15 linear map from state parameters to the stacked readout
/// signals of all 13 settings. Signals of I/4 vanish, so there is no offset
/// term. Entries are produced numerically by pushing each parameter basis
/// matrix through readout_signals.
struct MeasurementMap {
    Eigen::MatrixXd m;                    // 39 x 15
    std::vector<std::string> row_labels;  // setting per row triple
    std::vector<std::string> column_labels;
    double condition_number = 0.0;
    int rank = 0;
};

inline MeasurementMap build_linear_map() {
    const auto settings = tomography_settings();
    const auto basis = detail::parameter_basis();

    MeasurementMap map;
    map.m.resize(static_cast<Eigen::Index>(3 * settings.size()), 15);
    map.column_labels = detail::parameter_labels();
    for (size_t k = 0; k < settings.size(); ++k) {
        map.row_labels.push_back(settings[k].label);
        for (int p = 0; p < 15; ++p) {
            const Eigen::Vector3d s =
                readout_signals(basis[static_cast<size_t>(p)], settings[k].rotation);
            for (int r = 0; r < 3; ++r)
                map.m(static_cast<Eigen::Index>(3 * k + static_cast<size_t>(r)), p) = s(r);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map.m);
    const auto& sv = svd.singularValues();
    map.rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * sv(0)) ++map.rank;
    map.condition_number = sv(0) / sv(sv.size() - 1);
    if (map.rank < 15)
        throw NumericalError("build_linear_map: measurement map is rank deficient");
    return map;
}

struct ReconstructionReport {
    Matrix4c rho = Matrix4c::Identity() / 4.0;
    double residual = 0.0;  // RMS signal mismatch
    double condition_number = 0.0;
    bool psd_projected = false;
    bool inconsistent = false;  // residual > 0.5: signals contradict each other
};

/// Linear-inversion reconstruction. Requires one record per setting
/// (identity + 12 rotations); Hermiticity and unit trace hold by
/// construction, negative eigenvalues below -1e-8 trigger a projection to
/// the nearest physical state.
inline ReconstructionReport reconstruct(const std::vector<TomographyRecord>& records) {
    static const MeasurementMap map = build_linear_map();
    const auto settings = tomography_settings();

    std::vector<const TomographyRecord*> by_setting(settings.size(), nullptr);
    for (const auto& rec : records)
        for (size_t k = 0; k < settings.size(); ++k)
            if (rec.setting_label == settings[k].label) by_setting[k] = &rec;
    std::string missing;
    for (size_t k = 0; k < settings.size(); ++k)
        if (!by_setting[k]) missing += (missing.empty() ? "" : ", ") + settings[k].label;
    if (!missing.empty())
        throw std::invalid_argument("reconstruct: missing settings: " + missing);

    Eigen::VectorXd s(39);
    for (size_t k = 0; k < settings.size(); ++k) {
        s(static_cast<Eigen::Index>(3 * k)) = by_setting[k]->s1;
        s(static_cast<Eigen::Index>(3 * k + 1)) = by_setting[k]->s2;
        s(static_cast<Eigen::Index>(3 * k + 2)) = by_setting[k]->s3;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd theta = svd.solve(s);

    ReconstructionReport report;
    report.condition_number = map.condition_number;
    const auto basis = detail::parameter_basis();
    Matrix4c rho = Matrix4c::Identity() / 4.0;
    for (int p = 0; p < 15; ++p) rho += theta(p) * basis[static_cast<size_t>(p)];

    const Eigen::VectorXd mismatch = map.m * theta - s;
    report.residual = std::sqrt(mismatch.squaredNorm() / 39.0);
    report.inconsistent = report.residual > 0.5;

    Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        rho = project_to_psd(rho);
        report.psd_projected = true;
    }
    report.rho = rho;
    return report;
}

/// Alternate record source: apply each tomography rotation as a compiled
/// finite-duration pulse in the dynamics engine instead of an ideal matrix.
/// Exposes the readout bias from unequal single-quantum Rabi rates.
inline std::vector<TomographyRecord> simulate_records_dynamics(const SpinSystem& sys,
                                                               const Matrix4c& rho,
                                                               double omega1_hz) {
    std::vector<TomographyRecord> records;
    records.push_back({"identity", 0, 0, 0});
    {
        const Eigen::Vector3d s = readout_signals(rho, Matrix4c::Identity());
        records.back() = {"identity", s(0), s(1), s(2)};
    }
    for (const Transition& t : all_transitions())
        for (Axis ax : {Axis::X, Axis::Y}) {
            const double rabi = rabi_frequency(sys, t, omega1_hz);
            PhysicalPulse p;
            p.carrier_hz = transition_frequency(sys, t);
            p.omega1_hz = omega1_hz;
            p.phase_rad = ax == Axis::X ? 0.0 : pi / 2.0;
            p.duration_s = (pi / 2.0) / (2.0 * pi * rabi);
            const Matrix4c rotated =
                propagate(rotating_hamiltonian(sys, p), p.duration_s, rho);
            Eigen::Vector3d s;
            for (int i = 0; i < 3; ++i)
                s(i) = (rotated(i + 1, i + 1) - rotated(i, i)).real();
            records.push_back({std::string(1, axis_name(ax)) + std::to_string(t.lo) +
                                   std::to_string(t.hi),
                               s(0), s(1), s(2)});
        }
    return records;
}

// --------------------------------------------------------------------------
// JSON import/export
// --------------------------------------------------------------------------

inline std::string records_to_json(const std::vector<TomographyRecord>& records,
                                   int indent = 2) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : records)
        j.push_back({{"setting_label", r.setting_label},
                     {"s1", r.s1},
                     {"s2", r.s2},
                     {"s3", r.s3}});
    return j.dump(indent);
}

inline std::vector<TomographyRecord> records_from_json(std::string_view text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    std::vector<TomographyRecord> records;
    for (const auto& item : j)
        records.push_back({item.at("setting_label").get<std::string>(),
                           item.at("s1").get<double>(), item.at("s2").get<double>(),
                           item.at("s3").get<double>()});
    return records;
}

inline std::string report_to_json(const ReconstructionReport& report, int indent = 2) {
    nlohmann::json j;
    auto real_rows = nlohmann::json::array();
    auto imag_rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        auto re_row = nlohmann::json::array();
        auto im_row = nlohmann::json::array();
        for (int k = 0; k < 4; ++k) {
            re_row.push_back(report.rho(i, k).real());
            im_row.push_back(report.rho(i, k).imag());
        }
        real_rows.push_back(std::move(re_row));
        imag_rows.push_back(std::move(im_row));
    }
    j["rho_real"] = real_rows;
    j["rho_imag"] = imag_rows;
    j["residual"] = report.residual;
    j["condition_number"] = report.condition_number;
    j["psd_projected"] = report.psd_projected;
    j["inconsistent"] = report.inconsistent;
    return j.dump(indent);
}

}  // namespace quartit
