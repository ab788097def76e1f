#pragma once

#include <Eigen/Dense>

#include <string>

namespace handsoff {

/**
 * @brief Single-input linear time-invariant plant  x'(t) = A x(t) + B u(t).
 *
 * A is n-by-n, B is a single column of length n. All entries must be finite;
 * construction validates the shape and throws std::invalid_argument otherwise.
 */
class LtiSystem {
public:
    LtiSystem(Eigen::MatrixXd a_matrix, Eigen::VectorXd b_vector, std::string label = {});

    int dimension() const { return static_cast<int>(a_matrix_.rows()); }
    const Eigen::MatrixXd& a_matrix() const { return a_matrix_; }
    const Eigen::VectorXd& b_vector() const { return b_vector_; }
    const std::string& label() const { return label_; }

private:
    Eigen::MatrixXd a_matrix_;
    Eigen::VectorXd b_vector_;
    std::string label_;
};

/// Rank of [B, AB, ..., A^{n-1}B]; the pair (A,B) is controllable iff rank == n.
int controllability_rank(const LtiSystem& sys);
bool is_controllable(const LtiSystem& sys);

/**
 * @brief Piecewise-constant control on a uniform grid over [0, T].
 *
 * values[k] is the control held on [k*dt, (k+1)*dt), dt = T/N. The
 * default-constructed signal is empty (N = 0) and acts as a "no result"
 * placeholder in solver outputs.
 */
class ControlSignal {
public:
    ControlSignal() = default;
    ControlSignal(double horizon, Eigen::VectorXd values);

    bool empty() const { return values_.size() == 0; }
    double horizon() const { return horizon_; }
    int n_intervals() const { return static_cast<int>(values_.size()); }
    double dt() const { return horizon_ / static_cast<double>(values_.size()); }
    const Eigen::VectorXd& values() const { return values_; }
    double operator[](int k) const { return values_[k]; }

    /// Start of interval k, k*dt.
    double interval_start(int k) const { return dt() * static_cast<double>(k); }
    /// Midpoint of interval k, (k + 1/2)*dt.
    double interval_midpoint(int k) const { return dt() * (static_cast<double>(k) + 0.5); }

private:
    double horizon_ = 0.0;
    Eigen::VectorXd values_;
};

/// Default tolerance below which a sample counts as "off" when measuring support.
inline constexpr double kZeroTol = 1e-9;

/// L0 kernel: 1 for any nonzero argument, 0 at exactly zero.
double l0_kernel(double v);

/// Support measure dt * #{k : |u_k| > zero_tol}; lies in [0, T].
double l0_norm(const ControlSignal& u, double zero_tol = kZeroTol);

/// dt * sum_k |u_k|^p for p in (0, 1]. This is ||u||_p^p, not ||u||_p; p = 1 gives the L1 norm.
double lp_quasinorm_pow(const ControlSignal& u, double p);

/// L1 norm, dt * sum_k |u_k|.
double l1_norm(const ControlSignal& u);

/// max_k |u_k|.
double linf_norm(const ControlSignal& u);

/**
 * @brief Bundle of the norms of one signal. lp holds ||u||_p^p with the
 * exponent recorded alongside.
 */
struct NormReport {
    double l0 = 0.0;
    double l1 = 0.0;
    double lp = 0.0;
    double p = 1.0;
    double linf = 0.0;
};

NormReport norm_report(const ControlSignal& u, double p = 0.5, double zero_tol = kZeroTol);

}  // namespace handsoff
