#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace handsoff {

/// Primal feasibility tolerance, scaled by (1 + ||b||_inf).
inline constexpr double kLpFeasibilityTol = 1e-8;
/// Reduced-cost (optimality) tolerance.
inline constexpr double kLpOptimalityTol = 1e-9;
/// The basis inverse is rebuilt from scratch after this many pivots.
inline constexpr int kLpRefactorInterval = 50;
/// Consecutive degenerate pivots before Bland's rule takes over.
inline constexpr int kLpBlandThreshold = 40;

/**
 * @brief Dense LP in equality form:  min c'v  s.t.  A v = b,  l <= v <= u.
 *
 * Bounds may be +/-infinity. Fixed variables (l == u) are allowed.
 */
struct LinearProgram {
    Eigen::VectorXd cost;
    Eigen::MatrixXd eq_matrix;
    Eigen::VectorXd eq_rhs;
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;

    int n_vars() const { return static_cast<int>(cost.size()); }
    int n_rows() const { return static_cast<int>(eq_rhs.size()); }
    void validate() const;
};

enum class LpStatus : std::uint8_t { optimal, infeasible, unbounded };

/**
 * @brief Vertex solution of a LinearProgram.
 *
 * When status == optimal the point is basic: every nonbasic variable sits
 * exactly at one of its bounds and at most n_rows() variables are strictly
 * between bounds. duals holds the equality multipliers y with reduced costs
 * c - A'y sign-consistent with the active bounds.
 */
struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Eigen::VectorXd values;
    double objective = 0.0;
    std::vector<int> basis;  // basic structural indices, ascending
    Eigen::VectorXd duals;
    int iterations = 0;
    double max_residual = 0.0;  // ||Av - b||_inf at the returned point
};

/**
 * @brief Bounded-variable revised simplex with explicit basis inverse.
 *
 * Phase 1 minimizes the sum of artificial variables; phase 2 optimizes the
 * original cost. Entering-variable ties break toward the lowest index, so
 * identical inputs produce identical solutions. A solver instance owns its
 * workspace and is single-threaded; use one instance per concurrent solve.
 */
class SimplexSolver {
public:
    LpSolution solve(const LinearProgram& lp);

private:
    enum class VarState : std::uint8_t { basic, at_lower, at_upper, free_zero };

    void load(const LinearProgram& lp);
    void refactor();
    void recompute_basics();
    bool price(int& entering, int& direction) const;
    LpStatus run_phase(bool phase_one);
    void pivot(int entering, int direction);  // single ratio-test step
    double artificial_infeasibility() const;

    int n_struct_ = 0;
    int n_rows_ = 0;
    int n_total_ = 0;
    Eigen::MatrixXd work_a_;  // rows x (struct + artificial)
    Eigen::VectorXd rhs_;
    Eigen::VectorXd cost_;  // phase-dependent
    Eigen::VectorXd lower_, upper_;
    Eigen::VectorXd x_;
    Eigen::MatrixXd binv_;
    std::vector<int> basis_;
    std::vector<VarState> state_;
    int pivots_since_refactor_ = 0;
    int degenerate_run_ = 0;
    bool bland_ = false;
    int iterations_ = 0;
    bool step_was_unbounded_ = false;
};

/// Convenience wrapper: fresh solver per call.
LpSolution solve(const LinearProgram& lp);

struct FeasibilityReport {
    bool feasible = false;
    double max_residual = 0.0;
};

/// Phase-1 only: does a point with A v = b, l <= v <= u exist within tolerance?
FeasibilityReport check_feasible(const Eigen::MatrixXd& eq_matrix, const Eigen::VectorXd& eq_rhs,
                                 const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

}  // namespace handsoff
