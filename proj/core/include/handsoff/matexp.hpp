#pragma once

#include <Eigen/Dense>

#include "handsoff/lti_system.hpp"

namespace handsoff {

/// Hard cap on the number of squarings in expm; inputs needing more are rejected.
inline constexpr int kMaxSquarings = 60;

/**
 * @brief Matrix exponential by scaling-and-squaring with the degree-13
 * diagonal Pade approximant, scaling chosen from the 1-norm.
 *
 * Throws std::invalid_argument on non-finite input and std::runtime_error
 * if the required squaring count exceeds kMaxSquarings.
 */
Eigen::MatrixXd expm(const Eigen::MatrixXd& m);

/**
 * @brief Discretized terminal constraint for U(xi): column k holds the exact
 * integral of exp(-A t) B over [k dt, (k+1) dt], so that a piecewise-constant
 * control u is feasible exactly when  g * u = -xi.
 */
struct ConstraintMatrix {
    Eigen::MatrixXd g;   // n x N
    double horizon = 0.0;
    int n_intervals = 0;
};

/**
 * Builds ConstraintMatrix for the given grid. The first column comes from the
 * upper-right block of the exponential of the augmented matrix
 * [[-A, B], [0, 0]] * dt; later columns follow the semigroup recurrence
 * g[:,k+1] = exp(-A dt) g[:,k].
 */
ConstraintMatrix build_constraint_matrix(const LtiSystem& sys, double horizon, int n_intervals);

}  // namespace handsoff
