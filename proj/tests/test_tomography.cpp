#include "testutil.hpp"

using namespace quartit;
using Catch::Approx;

TEST_CASE("the rotation set: twelve pi/2 pulses, all unitary", "[tomography]") {
    const auto rotations = tomography_rotations();
    REQUIRE(rotations.size() == 12);
    bool has_y01 = false;
    for (const auto& r : rotations) {
        REQUIRE(is_unitary(r.rotation, 1e-12));
        if (r.label == "Y01") has_y01 = true;
    }
    REQUIRE(has_y01);
    REQUIRE(tomography_settings().size() == 13);
    REQUIRE(tomography_settings()[0].label == "identity");
}

TEST_CASE("readout signals are the adjacent diagonal differences", "[tomography]") {
    const Eigen::Vector3d s0 = readout_signals(basis_state(0), Matrix4c::Identity());
    REQUIRE(s0(0) == Approx(-1.0).margin(1e-14));
    REQUIRE(s0(1) == Approx(0.0).margin(1e-14));
    REQUIRE(s0(2) == Approx(0.0).margin(1e-14));

    std::mt19937_64 rng(3);
    for (const auto& setting : tomography_settings()) {
        const Eigen::Vector3d s =
            readout_signals(Matrix4c::Identity() / 4.0, setting.rotation);
        REQUIRE(s.norm() < 1e-14);  // the maximally mixed state is rotation-blind
    }

    // real coherence emerges in s1 after a Y01 pi/2 pulse:
    // with rho = I/4 + 0.1 (|0><1| + |1><0|), the rotated populations are
    // 1/4 -+ 0.1, so s1 = rho'_11 - rho'_00 = +0.2 under the fixed
    // Y convention (upper-right -sin).
    Matrix4c rho = Matrix4c::Identity() / 4.0;
    rho(0, 1) = rho(1, 0) = 0.1;
    const Eigen::Vector3d s =
        readout_signals(rho, selective_rotation({0, 1}, Axis::Y, pi / 2));
    REQUIRE(s(0) == Approx(0.2).margin(1e-12));
    REQUIRE(std::abs(s(1)) < 0.2);  // only the rotated pair moves appreciably
}

TEST_CASE("the measurement map has full rank 15 and a sane condition number",
          "[tomography]") {
    const MeasurementMap map = build_linear_map();
    REQUIRE(map.m.rows() == 39);
    REQUIRE(map.m.cols() == 15);
    REQUIRE(map.rank == 15);
    REQUIRE(map.condition_number < 1e3);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(map.m);
    REQUIRE(svd.singularValues()(14) > 1e-6);
}

TEST_CASE("identity rows touch only the diagonal parameters", "[tomography]") {
    const MeasurementMap map = build_linear_map();
    for (int r = 0; r < 3; ++r)          // identity setting: first three rows
        for (int c = 3; c < 15; ++c)      // off-diagonal parameter columns
            REQUIRE(std::abs(map.m(r, c)) < 1e-12);
}

TEST_CASE("Im(rho01) is visible only through the X01 setting", "[tomography]") {
    const MeasurementMap map = build_linear_map();
    const int im01_col = 9;  // columns: d10 d21 d32, re01..re23, im01..im23
    REQUIRE(map.column_labels[im01_col] == "im01");
    for (size_t k = 0; k < map.row_labels.size(); ++k) {
        const double weight = map.m.block(static_cast<Eigen::Index>(3 * k), im01_col, 3, 1)
                                  .cwiseAbs()
                                  .maxCoeff();
        if (map.row_labels[k] == "X01")
            REQUIRE(weight > 0.1);
        else
            REQUIRE(weight < 1e-12);
    }
}

TEST_CASE("Y settings carry the real parts, X settings the imaginary parts",
          "[tomography]") {
    const MeasurementMap map = build_linear_map();
    auto sub_rank = [&](char axis_letter, int col_begin) {
        std::vector<int> rows;
        for (size_t k = 0; k < map.row_labels.size(); ++k)
            if (map.row_labels[k][0] == axis_letter)
                for (int r = 0; r < 3; ++r) rows.push_back(static_cast<int>(3 * k) + r);
        Eigen::MatrixXd sub(rows.size(), 6);
        for (size_t i = 0; i < rows.size(); ++i)
            sub.row(static_cast<Eigen::Index>(i)) = map.m.block(rows[i], col_begin, 1, 6);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
        int rank = 0;
        for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-10) ++rank;
        return rank;
    };
    REQUIRE(sub_rank('Y', 3) == 6);  // six real-part columns
    REQUIRE(sub_rank('X', 9) == 6);  // six imaginary-part columns
}

TEST_CASE("noiseless reconstruction round trip", "[tomography]") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix4c rho =
            trial % 2 ? random_pure_density(rng) : random_mixed_density(rng);
        const auto report = reconstruct(simulate_records(rho));
        REQUIRE((report.rho - rho).norm() < 1e-8);
        REQUIRE(report.residual < 1e-10);
        REQUIRE_FALSE(report.inconsistent);
    }

    const auto mixed = reconstruct(simulate_records(Matrix4c::Identity() / 4.0));
    REQUIRE((mixed.rho - Matrix4c::Identity() / 4.0).norm() < 1e-12);
}

TEST_CASE("reconstruction is linear in the state", "[tomography]") {
    std::mt19937_64 rng(23);
    const Matrix4c rho1 = random_mixed_density(rng);
    const Matrix4c rho2 = random_mixed_density(rng);
    const double alpha = 0.3;
    const Matrix4c blend = alpha * rho1 + (1 - alpha) * rho2;
    const Matrix4c lhs = reconstruct(simulate_records(blend)).rho;
    const Matrix4c rhs = alpha * reconstruct(simulate_records(rho1)).rho +
                         (1 - alpha) * reconstruct(simulate_records(rho2)).rho;
    REQUIRE((lhs - rhs).norm() < 1e-8);
}

TEST_CASE("missing settings are reported by name", "[tomography]") {
    std::mt19937_64 rng(29);
    auto records = simulate_records(random_mixed_density(rng));
    records.erase(std::remove_if(records.begin(), records.end(),
                                 [](const TomographyRecord& r) {
                                     return r.setting_label == "X12" ||
                                            r.setting_label == "Y03";
                                 }),
                  records.end());
    try {
        reconstruct(records);
        FAIL("expected an error about missing settings");
    } catch (const std::invalid_argument& err) {
        const std::string what = err.what();
        REQUIRE(what.find("X12") != std::string::npos);
        REQUIRE(what.find("Y03") != std::string::npos);
    }
}

TEST_CASE("noisy records: median error under 0.05 at sigma = 0.01", "[tomography]") {
    std::mt19937_64 rng(31);
    std::vector<double> errors;
    for (int trial = 0; trial < 40; ++trial) {
        const Matrix4c rho = random_pure_density(rng);
        auto records = simulate_records(rho);
        for (auto& r : records) {
            r.s1 += 0.01 * gaussian(rng);
            r.s2 += 0.01 * gaussian(rng);
            r.s3 += 0.01 * gaussian(rng);
        }
        const auto report = reconstruct(records);
        errors.push_back((report.rho - rho).norm());
        REQUIRE(is_density_matrix(report.rho, 1e-9, -1e-8));
    }
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    REQUIRE(errors[errors.size() / 2] < 0.05);
}

TEST_CASE("gross negative eigenvalues trigger the PSD projection", "[tomography]") {
    // records of a pure state with hefty noise push the linear estimate
    // outside the physical set
    std::mt19937_64 rng(37);
    bool projected = false;
    for (int trial = 0; trial < 20 && !projected; ++trial) {
        auto records = simulate_records(basis_state(0));
        for (auto& r : records) {
            r.s1 += 0.05 * gaussian(rng);
            r.s2 += 0.05 * gaussian(rng);
            r.s3 += 0.05 * gaussian(rng);
        }
        const auto report = reconstruct(records);
        if (report.psd_projected) {
            projected = true;
            Eigen::SelfAdjointEigenSolver<Matrix4c> es(report.rho, Eigen::EigenvaluesOnly);
            REQUIRE(es.eigenvalues().minCoeff() >= -1e-12);
            REQUIRE(report.rho.trace().real() == Approx(1.0).margin(1e-12));
        }
    }
    REQUIRE(projected);
}

TEST_CASE("records survive a JSON round trip", "[tomography]") {
    std::mt19937_64 rng(41);
    const auto records = simulate_records(random_mixed_density(rng));
    const auto parsed = records_from_json(records_to_json(records));
    REQUIRE(parsed.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        REQUIRE(parsed[i].setting_label == records[i].setting_label);
        REQUIRE(parsed[i].s1 == records[i].s1);
        REQUIRE(parsed[i].s2 == records[i].s2);
        REQUIRE(parsed[i].s3 == records[i].s3);
    }

    const auto report = reconstruct(records);
    const std::string json = report_to_json(report);
    REQUIRE(json.find("rho_real") != std::string::npos);
    REQUIRE(json.find("condition_number") != std::string::npos);
}

TEST_CASE("finite-pulse records track the ideal ones at weak drive", "[tomography]") {
    SpinSystem sys;
    sys.f0_hz = 10e6;
    sys.dq_hz = 7.5e3;
    const Matrix4c rho = initial_polarized_state(0.1);
    const auto ideal = simulate_records(rho);
    const auto physical = simulate_records_dynamics(sys, rho, 30.0);
    REQUIRE(physical.size() == ideal.size());
    for (size_t i = 0; i < ideal.size(); ++i) {
        REQUIRE(physical[i].setting_label == ideal[i].setting_label);
        REQUIRE(physical[i].s1 == Approx(ideal[i].s1).margin(5e-3));
        REQUIRE(physical[i].s2 == Approx(ideal[i].s2).margin(5e-3));
        REQUIRE(physical[i].s3 == Approx(ideal[i].s3).margin(5e-3));
    }
}
