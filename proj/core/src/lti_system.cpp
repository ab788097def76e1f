#include "handsoff/lti_system.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace handsoff {

LtiSystem::LtiSystem(Eigen::MatrixXd a_matrix, Eigen::VectorXd b_vector, std::string label)
    : a_matrix_(std::move(a_matrix)), b_vector_(std::move(b_vector)), label_(std::move(label)) {
    if (a_matrix_.rows() == 0 || a_matrix_.rows() != a_matrix_.cols()) {
        throw std::invalid_argument("LtiSystem: A must be square and non-empty");
    }
    if (b_vector_.size() != a_matrix_.rows()) {
        throw std::invalid_argument("LtiSystem: B must be a column of length n");
    }
    if (!a_matrix_.allFinite() || !b_vector_.allFinite()) {
        throw std::invalid_argument("LtiSystem: matrix entries must be finite");
    }
}

int controllability_rank(const LtiSystem& sys) {
    const int n = sys.dimension();
    Eigen::MatrixXd ctrb(n, n);
    Eigen::VectorXd col = sys.b_vector();
    for (int k = 0; k < n; ++k) {
        ctrb.col(k) = col;
        col = sys.a_matrix() * col;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrb);
    lu.setThreshold(1e-12);
    return static_cast<int>(lu.rank());
}

bool is_controllable(const LtiSystem& sys) { return controllability_rank(sys) == sys.dimension(); }

ControlSignal::ControlSignal(double horizon, Eigen::VectorXd values)
    : horizon_(horizon), values_(std::move(values)) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
        throw std::invalid_argument("ControlSignal: horizon must be positive and finite");
    }
    if (values_.size() < 1) {
        throw std::invalid_argument("ControlSignal: need at least one interval");
    }
    if (!values_.allFinite()) {
        throw std::invalid_argument("ControlSignal: values must be finite");
    }
}

double l0_kernel(double v) { return v != 0.0 ? 1.0 : 0.0; }

double l0_norm(const ControlSignal& u, double zero_tol) {
    if (zero_tol < 0.0) {
        throw std::invalid_argument("l0_norm: zero_tol must be nonnegative");
    }
    if (u.empty()) return 0.0;
    int support = 0;
    for (int k = 0; k < u.n_intervals(); ++k) {
        if (std::abs(u[k]) > zero_tol) ++support;
    }
    return u.dt() * static_cast<double>(support);
}

double lp_quasinorm_pow(const ControlSignal& u, double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("lp_quasinorm_pow: p must lie in (0, 1]");
    }
    if (u.empty()) return 0.0;
    double acc = 0.0;
    for (int k = 0; k < u.n_intervals(); ++k) {
        acc += std::pow(std::abs(u[k]), p);
    }
    return u.dt() * acc;
}

double l1_norm(const ControlSignal& u) {
    if (u.empty()) return 0.0;
    return u.dt() * u.values().cwiseAbs().sum();
}

double linf_norm(const ControlSignal& u) {
    if (u.empty()) return 0.0;
    return u.values().cwiseAbs().maxCoeff();
}

NormReport norm_report(const ControlSignal& u, double p, double zero_tol) {
    NormReport report;
    report.l0 = l0_norm(u, zero_tol);
    report.l1 = l1_norm(u);
    report.lp = lp_quasinorm_pow(u, p);
    report.p = p;
    report.linf = linf_norm(u);
    return report;
}

}  // namespace handsoff
