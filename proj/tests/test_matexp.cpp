#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "handsoff/di_oracle.hpp"
#include "handsoff/matexp.hpp"

using namespace handsoff;

TEST_SUITE("matexp") {

TEST_CASE("exponential of the zero matrix is the identity") {
    const Eigen::MatrixXd e = expm(Eigen::MatrixXd::Zero(3, 3));
    CHECK((e - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("nilpotent exponential terminates: exp([[0,1],[0,0]]) = I + A") {
    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 0, 0;
    Eigen::MatrixXd expected(2, 2);
    expected << 1, 1, 0, 1;
    CHECK((expm(a) - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("diagonal exponential matches the scalar exponential") {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const Eigen::MatrixXd e = expm(d);
    CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
    CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
    CHECK(std::abs(e(0, 1)) < 1e-15);
    CHECK(std::abs(e(1, 0)) < 1e-15);
}

TEST_CASE("expm(A) expm(-A) = I for random matrices with norm up to 10") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 6);
    for (int draw = 0; draw < 20; ++draw) {
        const int n = dim(rng);
        Eigen::MatrixXd a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = entry(rng);
        const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
        if (norm1 > 10.0) a *= 10.0 / norm1;
        const Eigen::MatrixXd prod = expm(a) * expm((-a).eval());
        CHECK((prod - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("expm rejects bad input") {
    Eigen::MatrixXd nan_mat = Eigen::MatrixXd::Zero(2, 2);
    nan_mat(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(expm(nan_mat), std::invalid_argument);
    CHECK_THROWS_AS(expm(Eigen::MatrixXd::Zero(2, 3)), std::invalid_argument);

    // Needs more than the squaring budget: reject rather than return garbage.
    Eigen::MatrixXd huge = Eigen::MatrixXd::Identity(2, 2) * 1e20;
    CHECK_THROWS_AS(expm(huge), std::runtime_error);
}

TEST_CASE("constraint columns for the double integrator match the closed form") {
    // exp(-A t) B = (-t, 1)', so the column over [a, b] is (-(b^2-a^2)/2, b-a)'.
    const LtiSystem sys = double_integrator();
    const int n_intervals = 500;
    const double horizon = 5.0;
    const ConstraintMatrix cm = build_constraint_matrix(sys, horizon, n_intervals);
    REQUIRE(cm.g.rows() == 2);
    REQUIRE(cm.g.cols() == n_intervals);
    const double dt = horizon / n_intervals;
    for (int k = 0; k < n_intervals; ++k) {
        const double a = k * dt;
        const double b = (k + 1) * dt;
        CHECK(std::abs(cm.g(0, k) - (-(b * b - a * a) / 2.0)) < 1e-12);
        CHECK(std::abs(cm.g(1, k) - (b - a)) < 1e-12);
    }
}

TEST_CASE("single-interval double integrator column") {
    const ConstraintMatrix cm = build_constraint_matrix(double_integrator(), 5.0, 1);
    CHECK(cm.g(0, 0) == doctest::Approx(-12.5).epsilon(1e-13));
    CHECK(cm.g(1, 0) == doctest::Approx(5.0).epsilon(1e-13));
}

TEST_CASE("scalar integrator columns are the interval lengths") {
    const LtiSystem sys(Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Ones(1));
    const ConstraintMatrix cm = build_constraint_matrix(sys, 2.0, 8);
    for (int k = 0; k < 8; ++k) {
        CHECK(cm.g(0, k) == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("columns obey the semigroup recurrence") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> entry(-0.6, 0.6);
    Eigen::MatrixXd a(3, 3);
    Eigen::VectorXd b(3);
    for (int i = 0; i < 3; ++i) {
        b[i] = entry(rng);
        for (int j = 0; j < 3; ++j) a(i, j) = entry(rng);
    }
    const LtiSystem sys(a, b);
    const double horizon = 3.0;
    const int n_intervals = 60;
    const ConstraintMatrix cm = build_constraint_matrix(sys, horizon, n_intervals);
    const Eigen::MatrixXd step = expm((-a * (horizon / n_intervals)).eval());
    for (int k = 0; k + 1 < n_intervals; ++k) {
        const Eigen::VectorXd expected = step * cm.g.col(k);
        const double scale = expected.cwiseAbs().maxCoeff();
        CHECK((cm.g.col(k + 1) - expected).cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + scale));
    }

    // Column sum equals the whole-horizon integral computed in one shot.
    const ConstraintMatrix whole = build_constraint_matrix(sys, horizon, 1);
    CHECK((cm.g.rowwise().sum() - whole.g.col(0)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("refining the grid splits columns consistently") {
    for (const bool use_di : {true, false}) {
        LtiSystem sys = use_di
                            ? double_integrator()
                            : LtiSystem((Eigen::MatrixXd(2, 2) << -0.3, 0.2, 0.1, -0.5).finished(),
                                        (Eigen::VectorXd(2) << 1.0, 0.4).finished());
        const int n_intervals = 40;
        const ConstraintMatrix coarse = build_constraint_matrix(sys, 4.0, n_intervals);
        const ConstraintMatrix fine = build_constraint_matrix(sys, 4.0, 2 * n_intervals);
        for (int k = 0; k < n_intervals; ++k) {
            const Eigen::VectorXd merged = fine.g.col(2 * k) + fine.g.col(2 * k + 1);
            CHECK((coarse.g.col(k) - merged).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("build_constraint_matrix validates its grid") {
    CHECK_THROWS_AS(build_constraint_matrix(double_integrator(), 0.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_constraint_matrix(double_integrator(), 1.0, 0),
                    std::invalid_argument);
}

}  // TEST_SUITE
