#include "testutil.hpp"

using namespace quartit;
using testutil::frob;
using testutil::mat4;
using Catch::Approx;

TEST_CASE("spin operators have the standard spin-3/2 matrix elements", "[spin]") {
    const auto& ops = spin_operators();

    Matrix4c iz_expected = Matrix4c::Zero();
    iz_expected.diagonal() << 1.5, 0.5, -0.5, -1.5;
    REQUIRE(frob(ops.iz, iz_expected) < algebra_tol);

    const double s32 = std::sqrt(3.0) / 2.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double expected = (std::abs(i - j) == 1) ? (i + j == 1 || i + j == 5 ? s32 : 1.0)
                                                           : 0.0;
            REQUIRE(std::abs(ops.ix(i, j) - complexd(expected, 0)) < algebra_tol);
        }

    Matrix4c q_expected = Matrix4c::Zero();
    q_expected.diagonal() << 1, -1, -1, 1;
    REQUIRE(frob(ops.q, q_expected) < algebra_tol);

    REQUIRE(std::abs(ops.ix.trace()) < algebra_tol);
    REQUIRE(std::abs(ops.iy.trace()) < algebra_tol);
    REQUIRE(std::abs(ops.iz.trace()) < algebra_tol);
    REQUIRE((ops.iz * ops.iz).trace().real() == Approx(5.0).margin(1e-12));
}

TEST_CASE("angular momentum commutators close cyclically", "[spin]") {
    const auto& ops = spin_operators();
    const complexd i(0, 1);
    REQUIRE(frob(ops.ix * ops.iy - ops.iy * ops.ix, i * ops.iz) < algebra_tol);
    REQUIRE(frob(ops.iy * ops.iz - ops.iz * ops.iy, i * ops.ix) < algebra_tol);
    REQUIRE(frob(ops.iz * ops.ix - ops.ix * ops.iz, i * ops.iy) < algebra_tol);
}

TEST_CASE("qubit rotations follow the fixed sign convention", "[spin]") {
    Matrix2c x_pi;
    x_pi << 0, complexd(0, -1), complexd(0, -1), 0;
    REQUIRE((qubit_rotation(Vector3d::UnitX(), pi) - x_pi).norm() < algebra_tol);

    REQUIRE((qubit_rotation(Vector3d::UnitZ(), 0.0) - Matrix2c::Identity()).norm() <
            algebra_tol);

    Matrix2c y_half;
    y_half << 1, -1, 1, 1;
    y_half /= std::sqrt(2.0);
    REQUIRE((qubit_rotation(Vector3d::UnitY(), pi / 2) - y_half).norm() < algebra_tol);

    REQUIRE_THROWS_AS(qubit_rotation(Vector3d(1.0, 1.0, 0.0), 0.3), std::invalid_argument);
}

TEST_CASE("selective rotations touch only their two levels", "[spin]") {
    for (const Transition& t : all_transitions())
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
            REQUIRE(frob(selective_rotation(t, ax, 0.0), Matrix4c::Identity()) < algebra_tol);

    const Matrix4c x01 = selective_rotation({0, 1}, Axis::X, pi);
    const Matrix4c x01_expected = mat4({0, complexd(0, -1), 0, 0,   //
                                        complexd(0, -1), 0, 0, 0,   //
                                        0, 0, 1, 0,                 //
                                        0, 0, 0, 1});
    REQUIRE(frob(x01, x01_expected) < algebra_tol);

    Matrix4c z23_expected = Matrix4c::Identity();
    z23_expected(2, 2) = complexd(0, -1);
    z23_expected(3, 3) = complexd(0, 1);
    REQUIRE(frob(selective_rotation({2, 3}, Axis::Z, pi), z23_expected) < algebra_tol);
}

TEST_CASE("selective rotations invert and are 4-pi periodic", "[spin]") {
    const double grid[] = {0.1, 1.0, pi / 2, 2.3, pi, 5.0};
    for (const Transition& t : all_transitions())
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
            for (double th : grid) {
                const Matrix4c u = selective_rotation(t, ax, th);
                REQUIRE(is_unitary(u));
                REQUIRE(frob(u * selective_rotation(t, ax, -th), Matrix4c::Identity()) <
                        algebra_tol);
                REQUIRE(frob(selective_rotation(t, ax, th + 4 * pi), u) < 1e-11);
                // one extra full turn flips the sign of the active block only
                const Matrix4c v = selective_rotation(t, ax, th + 2 * pi);
                REQUIRE(std::abs(v(t.lo, t.lo) + u(t.lo, t.lo)) < 1e-11);
                REQUIRE(std::abs(v(t.lo, t.hi) + u(t.lo, t.hi)) < 1e-11);
                REQUIRE(std::abs(v(t.hi, t.hi) + u(t.hi, t.hi)) < 1e-11);
            }
}

TEST_CASE("tensor2 reproduces the logical-qubit Hadamard matrices", "[spin]") {
    REQUIRE(frob(tensor2(Matrix2c::Identity(), Matrix2c::Identity()), Matrix4c::Identity()) <
            algebra_tol);

    const double r = 1.0 / std::sqrt(2.0);
    const Matrix4c h_on_a = mat4({r, 0, r, 0,    //
                                  0, r, 0, r,    //
                                  r, 0, -r, 0,   //
                                  0, r, 0, -r});
    REQUIRE(frob(tensor2(hadamard2(), Matrix2c::Identity()), h_on_a) < algebra_tol);

    const Matrix4c h_on_b = mat4({r, r, 0, 0,    //
                                  r, -r, 0, 0,   //
                                  0, 0, r, r,    //
                                  0, 0, r, -r});
    REQUIRE(frob(tensor2(Matrix2c::Identity(), hadamard2()), h_on_b) < algebra_tol);
}

TEST_CASE("equal_up_to_phase detects phase-equivalence and orthogonality", "[spin]") {
    const Matrix4c u = selective_rotation({0, 2}, Axis::Y, 1.1) *
                       selective_rotation({1, 3}, Axis::X, 0.4);
    const complexd c = std::exp(complexd(0, pi / 7));
    auto match = equal_up_to_phase(u, Matrix4c(c * u), 1e-10);
    REQUIRE(match.equal);
    REQUIRE(match.phase_defined);
    REQUIRE(std::abs(match.phase - std::conj(c)) < 1e-12);

    auto mismatch = equal_up_to_phase(selective_rotation({0, 1}, Axis::X, pi),
                                      Matrix4c(Matrix4c::Identity()), 1e-10);
    REQUIRE_FALSE(mismatch.equal);

    // traceless overlap: orthogonal, no best phase exists
    auto orthogonal = equal_up_to_phase(axis_rotation(Axis::X, pi),
                                        Matrix2c(Matrix2c::Identity()), 1e-10);
    REQUIRE_FALSE(orthogonal.equal);
    REQUIRE_FALSE(orthogonal.phase_defined);

    // single-qubit identity: H equals i X(pi) Y(pi/2) up to (here: exactly) phase
    const Matrix2c lhs = imag_unit * axis_rotation(Axis::X, pi) * axis_rotation(Axis::Y, pi / 2);
    auto h_match = equal_up_to_phase(lhs, hadamard2(), 1e-10);
    REQUIRE(h_match.equal);
}

TEST_CASE("mz reads the longitudinal magnetization", "[spin]") {
    REQUIRE(mz(basis_state(0)) == Approx(1.5).margin(1e-12));
    REQUIRE(mz(basis_state(3)) == Approx(-1.5).margin(1e-12));
    REQUIRE(mz(Matrix4c::Identity() / 4.0) == Approx(0.0).margin(1e-12));
}

TEST_CASE("mz is blind to any Z-axis selective rotation", "[spin]") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix4c rho = random_mixed_density(rng);
        for (const Transition& t : all_transitions()) {
            const Matrix4c u = selective_rotation(t, Axis::Z, 0.3 + trial * 0.17);
            REQUIRE(mz(apply_unitary(u, rho)) == Approx(mz(rho)).margin(1e-12));
        }
    }
}

TEST_CASE("apply_unitary against a hand-rolled matrix product", "[spin]") {
    REQUIRE(frob(apply_unitary(Matrix4c::Identity(), basis_state(2)), basis_state(2)) <
            algebra_tol);
    REQUIRE(frob(apply_unitary(selective_rotation({0, 1}, Axis::X, pi), basis_state(0)),
                 basis_state(1)) < algebra_tol);

    // independent oracle: explicit triple loop product of Y12(pi/2) rho Y12(pi/2)^dag
    Matrix4c rho = Matrix4c::Zero();
    rho.diagonal() << 0.4, 0.3, 0.2, 0.1;
    const double c = std::cos(pi / 4), s = std::sin(pi / 4);
    complexd y12[4][4] = {};
    for (int i = 0; i < 4; ++i) y12[i][i] = 1.0;
    y12[1][1] = c;
    y12[1][2] = -s;
    y12[2][1] = s;
    y12[2][2] = c;
    complexd expected[4][4] = {};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l)
                    expected[i][j] += y12[i][k] * rho(k, l) * std::conj(y12[j][l]);

    const Matrix4c out = apply_unitary(selective_rotation({1, 2}, Axis::Y, pi / 2), rho);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) REQUIRE(std::abs(out(i, j) - expected[i][j]) < 1e-12);

    REQUIRE(out(0, 0).real() == Approx(0.4).margin(1e-12));
    REQUIRE(out(1, 1).real() == Approx(0.25).margin(1e-12));
    REQUIRE(out(2, 2).real() == Approx(0.25).margin(1e-12));
    REQUIRE(out(3, 3).real() == Approx(0.1).margin(1e-12));
    REQUIRE(std::abs(out(1, 2).real()) > 0.01);  // the pulse leaves a real coherence
}

TEST_CASE("apply_unitary preserves trace, hermiticity and spectrum", "[spin]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const Matrix4c rho = trial % 2 ? random_mixed_density(rng) : random_pure_density(rng);
        Matrix4c u = Matrix4c::Identity();
        for (int k = 0; k < 5; ++k) {
            const auto& t = all_transitions()[rng() % 6];
            const Axis ax = static_cast<Axis>(rng() % 3);
            u = selective_rotation(t, ax, std::uniform_real_distribution<>(-pi, pi)(rng)) * u;
        }
        const Matrix4c out = apply_unitary(u, rho);
        REQUIRE(std::abs(out.trace() - rho.trace()) < 1e-12);
        REQUIRE(is_hermitian(out, 1e-12));
        Eigen::SelfAdjointEigenSolver<Matrix4c> ea(rho, Eigen::EigenvaluesOnly);
        Eigen::SelfAdjointEigenSolver<Matrix4c> eb(out, Eigen::EigenvaluesOnly);
        for (int i = 0; i < 4; ++i)
            REQUIRE(ea.eigenvalues()(i) == Approx(eb.eigenvalues()(i)).margin(1e-10));
    }
}

TEST_CASE("density matrix validity checks", "[spin]") {
    REQUIRE(is_density_matrix(Matrix4c::Identity() / 4.0));
    REQUIRE(is_density_matrix(basis_state(1)));
    Matrix4c bad = Matrix4c::Identity() / 4.0;
    bad(0, 0) += 0.5;  // trace off
    REQUIRE_FALSE(is_density_matrix(bad));
    Matrix4c neg = Matrix4c::Zero();
    neg.diagonal() << 1.2, -0.2, 0, 0;
    REQUIRE_FALSE(is_density_matrix(neg));
}

TEST_CASE("transition construction validates its levels", "[spin]") {
    REQUIRE_THROWS_AS(Transition(2, 2), std::invalid_argument);
    REQUIRE_THROWS_AS(Transition(3, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(Transition(-1, 2), std::invalid_argument);
    REQUIRE(Transition(0, 3).delta_m() == 3);
}
