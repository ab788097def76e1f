#pragma once

#include <Eigen/Dense>

#include <optional>

#include "handsoff/lti_system.hpp"
#include "handsoff/matexp.hpp"
#include "handsoff/simplex.hpp"

namespace handsoff {

/// Default grid resolution; T = 5 then gives dt = 0.01.
inline constexpr int kDefaultGridIntervals = 500;
/// A polish step may not raise the L1 value by more than this.
inline constexpr double kPolishL1Slack = 1e-8;
/// Samples within this distance of {-1, 0, 1} count as on-lattice.
inline constexpr double kLatticeTol = 1e-9;
inline constexpr double kDefaultReweightP = 0.5;
inline constexpr int kDefaultReweightMaxIter = 20;
inline constexpr double kDefaultReweightEpsilon = 1e-4;

/**
 * @brief Discretized problem instance: steer xi to the origin over [0, T]
 * with |u| <= 1, the terminal condition expressed as  constraint.g * u = -xi.
 */
struct TranscribedProblem {
    LtiSystem system;
    Eigen::VectorXd xi;
    double horizon;
    int n_intervals;
    ConstraintMatrix constraint;

    double dt() const { return horizon / static_cast<double>(n_intervals); }
};

TranscribedProblem transcribe(const LtiSystem& sys, const Eigen::VectorXd& xi, double horizon,
                              int n_intervals);

/// Infeasibility of the terminal constraint is an answer, not an error.
enum class SolveStatus : int { ok, not_reachable };
enum class SolveMethod : int { l1_vertex, reweighted_lp };

/**
 * @brief Outcome of a sparse-control solve.
 *
 * l1_value estimates V1(xi) (the minimum L1 norm); l0_value the support
 * measure of the returned control. fractional_count counts samples farther
 * than kLatticeTol from {-1, 0, 1}.
 */
struct SparseSolveResult {
    SolveStatus status = SolveStatus::not_reachable;
    ControlSignal control;
    double l1_value = 0.0;
    double l0_value = 0.0;
    int fractional_count = 0;
    SolveMethod method = SolveMethod::l1_vertex;
    int iterations = 0;
};

/**
 * Minimum-L1 control via the split formulation u = u+ - u-, solved to a
 * vertex: at most n samples end up strictly between the lattice values.
 */
SparseSolveResult solve_l1(const TranscribedProblem& problem);

/**
 * Maximum hands-off (minimum support) control. Solves the L1 problem to a
 * vertex, re-solves over the L1-optimal face to concentrate the support
 * around its centroid, then pins remaining fractional samples to {-1, 0, 1}
 * one at a time, accepting a pin only when feasibility holds and the L1
 * value is preserved. When no exact on-grid pin exists the result falls back
 * to reweighted refinement and reports its fractional count honestly.
 */
SparseSolveResult solve_max_handsoff(const TranscribedProblem& problem);

/**
 * Iteratively reweighted L1 surrogate for the Lp quasi-norm cost, 0 < p < 1:
 * weights start at 1 and follow w_k = (|u_k| + epsilon)^(p-1) until the
 * support stops changing or max_iter is reached. Returns the best iterate by
 * support measure, so its l0_value never exceeds the plain L1 vertex's.
 */
SparseSolveResult solve_reweighted_lp(const TranscribedProblem& problem,
                                      double p = kDefaultReweightP,
                                      int max_iter = kDefaultReweightMaxIter,
                                      double epsilon = kDefaultReweightEpsilon);

/// Optimal value V(xi) (== V1(xi)); empty when xi is not reachable.
std::optional<double> value(const TranscribedProblem& problem);

/// Phase-1 feasibility of the transcription; agrees with value() by construction.
bool is_reachable(const LtiSystem& sys, const Eigen::VectorXd& xi, double horizon,
                  int n_intervals);

/// #samples farther than lattice_tol from every element of {-1, 0, 1}.
int fractional_sample_count(const ControlSignal& u, double lattice_tol = kLatticeTol);

/// The raw split-variable LP behind solve_l1; exposed for probes that need duals.
LinearProgram l1_split_lp(const TranscribedProblem& problem);
/// Same LP with per-sample weights on |u_k| (one reweighting step).
LinearProgram weighted_l1_split_lp(const TranscribedProblem& problem,
                                   const Eigen::VectorXd& weights);
ControlSignal control_from_split(const TranscribedProblem& problem,
                                 const Eigen::VectorXd& split_values);

}  // namespace handsoff
