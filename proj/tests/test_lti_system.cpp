#include <doctest.h>

#include <cmath>
#include <random>

#include "handsoff/lti_system.hpp"

using namespace handsoff;

namespace {

ControlSignal indicator_signal(double horizon, int n, double lo, double hi, double height = 1.0) {
    Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
    const double dt = horizon / n;
    for (int k = 0; k < n; ++k) {
        const double mid = dt * (k + 0.5);
        if (mid >= lo && mid < hi) values[k] = height;
    }
    return ControlSignal(horizon, std::move(values));
}

ControlSignal ramp_signal(int n) {  // f(t) = t on [0, 1], midpoint sampled
    Eigen::VectorXd values(n);
    for (int k = 0; k < n; ++k) values[k] = (k + 0.5) / n;
    return ControlSignal(1.0, std::move(values));
}

}  // namespace

TEST_SUITE("lti_core") {

TEST_CASE("l0 kernel is the exact support indicator") {
    CHECK(l0_kernel(0.0) == 0.0);
    CHECK(l0_kernel(1.0) == 1.0);
    CHECK(l0_kernel(-0.3) == 1.0);
    CHECK(l0_kernel(1e-300) == 1.0);
}

TEST_CASE("l0 norm measures support") {
    ControlSignal zero(3.0, Eigen::VectorXd::Zero(30));
    CHECK(l0_norm(zero) == 0.0);

    ControlSignal full(5.0, Eigen::VectorXd::Ones(500));
    CHECK(l0_norm(full) == doctest::Approx(5.0).epsilon(1e-14));

    // Unit pulse on [t1, t2) with t1 = xi2/2 - xi1/xi2, t2 = -xi2/2 - xi1/xi2
    // at (xi1, xi2) = (1, -1): t1 = 0.5, t2 = 1.5, support measure 1.
    const double t1 = -1.0 / 2.0 - 1.0 / -1.0;
    const double t2 = 1.0 / 2.0 - 1.0 / -1.0;
    CHECK(t1 == doctest::Approx(0.5));
    CHECK(t2 == doctest::Approx(1.5));
    ControlSignal pulse = indicator_signal(5.0, 500, t1, t2);
    CHECK(std::abs(l0_norm(pulse) - 1.0) < 1e-12);

    CHECK_THROWS_AS(l0_norm(pulse, -1.0), std::invalid_argument);
}

TEST_CASE("lp quasi-norm of bang-off-bang signals equals the support measure") {
    Eigen::VectorXd values = Eigen::VectorXd::Zero(100);
    for (int k = 10; k < 35; ++k) values[k] = (k % 2 == 0) ? 1.0 : -1.0;
    ControlSignal u(2.0, values);
    const double support = l0_norm(u, 0.0);
    for (const double p : {0.1, 0.5, 0.9, 1.0}) {
        CHECK(lp_quasinorm_pow(u, p) == doctest::Approx(support).epsilon(1e-13));
    }
}

TEST_CASE("lp quasi-norm quadrature against the closed-form integral of t^p") {
    // integral_0^1 t^p dt = 1/(p+1)
    ControlSignal ramp = ramp_signal(10000);
    for (const double p : {0.5, 0.1, 0.01, 0.001}) {
        CHECK(std::abs(lp_quasinorm_pow(ramp, p) - 1.0 / (p + 1.0)) < 1e-4);
    }
    CHECK(lp_quasinorm_pow(ramp, 0.5) == doctest::Approx(1.0 / 1.5).epsilon(1e-5));
    CHECK(lp_quasinorm_pow(ramp, 0.01) == doctest::Approx(1.0 / 1.01).epsilon(1e-5));
}

TEST_CASE("lp quasi-norm approaches the support measure as p drops") {
    ControlSignal ramp = ramp_signal(10000);
    const double l0 = l0_norm(ramp, 0.0);
    CHECK(l0 == doctest::Approx(1.0));
    double previous = 0.0;
    for (const double p : {0.5, 0.1, 0.01, 0.001}) {
        const double lp = lp_quasinorm_pow(ramp, p);
        CHECK(lp >= previous);
        CHECK(lp <= l0 + 1e-12);
        previous = lp;
    }
    CHECK(std::abs(lp_quasinorm_pow(ramp, 0.001) - l0) < 0.01);
    CHECK_THROWS_AS(lp_quasinorm_pow(ramp, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lp_quasinorm_pow(ramp, 1.5), std::invalid_argument);
}

TEST_CASE("linf norm") {
    CHECK(linf_norm(ControlSignal(1.0, Eigen::VectorXd::Zero(4))) == 0.0);
    Eigen::VectorXd v3(3);
    v3 << -1.0, 0.0, 1.0;
    CHECK(linf_norm(ControlSignal(1.0, v3)) == 1.0);
    Eigen::VectorXd v2(2);
    v2 << 0.5, -0.25;
    CHECK(linf_norm(ControlSignal(1.0, v2)) == 0.5);
}

TEST_CASE("norm inequality chain on random magnitude-bounded signals") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 200);
    for (int draw = 0; draw < 50; ++draw) {
        const int n = len(rng);
        Eigen::VectorXd values(n);
        for (int k = 0; k < n; ++k) values[k] = amp(rng);
        ControlSignal u(2.5, values);
        REQUIRE(linf_norm(u) <= 1.0);
        const double l0 = l0_norm(u, 0.0);
        double previous = 0.0;
        for (const double p : {0.9, 0.5, 0.1, 0.01}) {
            const double lp = lp_quasinorm_pow(u, p);
            CHECK(lp <= l0 + 1e-12);
            CHECK(lp >= previous - 1e-12);  // monotone toward the support measure
            previous = lp;
        }
        CHECK(l1_norm(u) <= l0 + 1e-12);
    }
}

TEST_CASE("support measure is invariant under sign flips and nonzero scaling") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    Eigen::VectorXd values(64);
    for (int k = 0; k < 64; ++k) values[k] = (k % 3 == 0) ? 0.0 : amp(rng);
    ControlSignal u(4.0, values);
    const double l0 = l0_norm(u, 0.0);
    for (const double alpha : {-1.0, 2.5, -0.3, 1e-6}) {
        ControlSignal scaled(4.0, (alpha * values).eval());
        CHECK(l0_norm(scaled, 0.0) == l0);
    }
}

TEST_CASE("norm report is self-consistent") {
    Eigen::VectorXd values(8);
    values << 1.0, 0.0, -1.0, 0.5, 0.0, 0.0, -0.25, 1.0;
    ControlSignal u(2.0, values);
    const NormReport report = norm_report(u, 0.5);
    CHECK(report.p == 0.5);
    CHECK(report.l1 == doctest::Approx(lp_quasinorm_pow(u, 1.0)));
    CHECK(report.l0 <= u.horizon());
    CHECK(report.l0 >= 0.0);
    CHECK(report.linf == 1.0);
    CHECK(report.lp <= report.l0 + 1e-12);  // linf <= 1 here
}

TEST_CASE("control signal construction validates its grid") {
    CHECK_THROWS_AS(ControlSignal(0.0, Eigen::VectorXd::Ones(3)), std::invalid_argument);
    CHECK_THROWS_AS(ControlSignal(-1.0, Eigen::VectorXd::Ones(3)), std::invalid_argument);
    CHECK_THROWS_AS(ControlSignal(1.0, Eigen::VectorXd()), std::invalid_argument);
    Eigen::VectorXd bad(2);
    bad << 1.0, std::nan("");
    CHECK_THROWS_AS(ControlSignal(1.0, bad), std::invalid_argument);

    ControlSignal ok(2.0, Eigen::VectorXd::Zero(4));
    CHECK(ok.dt() == 0.5);
    CHECK(ok.interval_start(1) == 0.5);
    CHECK(ok.interval_midpoint(0) == 0.25);
}

TEST_CASE("lti system construction validates shapes") {
    Eigen::MatrixXd a(2, 2);
    a << 0, 1, 0, 0;
    Eigen::VectorXd b(2);
    b << 0, 1;
    const LtiSystem sys(a, b, "di");
    CHECK(sys.dimension() == 2);
    CHECK(sys.label() == "di");
    CHECK(is_controllable(sys));

    CHECK_THROWS_AS(LtiSystem(Eigen::MatrixXd::Zero(2, 3), b), std::invalid_argument);
    CHECK_THROWS_AS(LtiSystem(a, Eigen::VectorXd::Zero(3)), std::invalid_argument);
    Eigen::MatrixXd bad = a;
    bad(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(LtiSystem(bad, b), std::invalid_argument);

    // x2 is disconnected from the input: not controllable.
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(2, 2);
    Eigen::VectorXd b0(2);
    b0 << 1, 0;
    CHECK(controllability_rank(LtiSystem(a0, b0)) == 1);
    CHECK_FALSE(is_controllable(LtiSystem(a0, b0)));
}

}  // TEST_SUITE
