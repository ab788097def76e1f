#pragma once

#include <Eigen/Dense>

#include "handsoff/lti_system.hpp"

namespace handsoff {

/// The double-integrator plant: A = [[0,1],[0,0]], B = (0,1)'.
LtiSystem double_integrator();

/**
 * @brief Double-integrator instance: initial state (xi1, xi2), horizon T.
 *
 * Closed-form ground truth exists on the region where the L1-optimal control
 * is non-unique; see in_nonnormal_region.
 */
struct DiInstance {
    double xi1 = 0.0;
    double xi2 = 0.0;
    double horizon = 0.0;
};

/// Rectangular pulse: u = height on [start, end), 0 elsewhere.
struct RectPulse {
    double start = 0.0;
    double end = 0.0;
    double height = 0.0;

    double width() const { return end - start; }
};

/**
 * True iff the L1-optimal control problem is non-normal for this instance:
 * xi2^2 / 2 < xi1, xi2 < 0, and -xi2/2 - xi1/xi2 < T.
 */
bool in_nonnormal_region(const DiInstance& inst);

/// Switch times of the unit pulse that is a maximum hands-off control.
struct SwitchTimes {
    double t1 = 0.0;
    double t2 = 0.0;
};

/**
 * Closed-form maximum hands-off control for a non-normal instance: u = 1 on
 * [t1, t2) with t1 = xi2/2 - xi1/xi2 and t2 = -xi2/2 - xi1/xi2, zero
 * elsewhere. Its support measure is t2 - t1 = -xi2. Throws
 * std::invalid_argument outside the non-normal region.
 */
SwitchTimes analytic_handsoff(const DiInstance& inst);

/// The hands-off pulse of analytic_handsoff as a RectPulse (height 1).
RectPulse analytic_handsoff_pulse(const DiInstance& inst);

/// analytic_handsoff sampled on a uniform grid (exact when t1, t2 sit on grid edges).
ControlSignal analytic_handsoff_signal(const DiInstance& inst, int n_intervals);

/**
 * The two moment conditions every L1-optimal control with 0 <= u <= 1
 * satisfies on the non-normal region:
 *   m0 = integral of u        = -xi2,
 *   m1 = double integral of u = -xi1 - xi2 T.
 */
std::pair<double, double> moment_constraints(const DiInstance& inst);

/**
 * A deterministic L1-optimal control that is NOT L0-optimal: a rectangular
 * pulse of height < 1 matching both moments, width 2*(-xi2) when that fits
 * in [0, T] (then the height is exactly 1/2 and the support measure is twice
 * the hands-off optimum). Throws std::invalid_argument outside the
 * non-normal region or when no such pulse fits the horizon.
 */
RectPulse non_sparse_l1_pulse(const DiInstance& inst);

/// non_sparse_l1_pulse sampled on a uniform grid.
ControlSignal non_sparse_l1_control(const DiInstance& inst, int n_intervals);

/**
 * Closed-form terminal state x(T) of the double integrator started at
 * (xi1, xi2) under a rectangular pulse; exact double integration, no grid.
 */
Eigen::Vector2d terminal_state_under_pulse(const DiInstance& inst, const RectPulse& pulse);

}  // namespace handsoff
