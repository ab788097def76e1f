#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "handsoff/lti_system.hpp"
#include "handsoff/solver.hpp"

namespace handsoff {

/// Sign-condition slack allowed when searching for a certificate.
inline constexpr double kCertificateTol = 1e-6;
/// Band around |s| = 1 counted as "pinned" by the normality diagnostic.
inline constexpr double kBoundaryBand = 1e-6;
/// Band around |s| = 1 treated as ambiguous during synthesis.
inline constexpr double kSynthesisAmbiguityTol = 1e-9;

/**
 * @brief Initial costate q0 together with its plant; the costate evolves as
 * q(t) = exp(-A' t) q0 and drives the switching function s(t) = B' q(t).
 */
struct CostateSpec {
    LtiSystem system;
    Eigen::VectorXd q0;
};

/// s(t) = B' exp(-A' t) q0.
double switching_function(const CostateSpec& spec, double t);

/// H(x, q, u) = |u|^p + q'(A x + B u) for p in (0, 1].
double hamiltonian_lp(const LtiSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& q,
                      double u, double p);

/**
 * Minimizers of |u|^p + s u over |u| <= 1 for 0 < p < 1, as a function of
 * the switching value s. Returns the exact case split:
 * s < -1 -> {1}; s = -1 -> {0, 1}; |s| < 1 -> {0}; s = 1 -> {-1, 0}; s > 1 -> {-1}.
 */
std::vector<double> pointwise_argmin(double s, double p);

/**
 * Dead-zone synthesis: samples s at interval midpoints and applies the
 * pointwise argmin; within kSynthesisAmbiguityTol of |s| = 1 the ambiguous
 * set resolves to 0 (hands-off preference).
 */
ControlSignal synthesize(const CostateSpec& spec, double horizon, int n_intervals);

/**
 * @brief Witness that a control satisfies the minimum-principle sign pattern.
 *
 * max_violation measures how far the switching values stray from the exact
 * (unrelaxed) conditions; accepted certificates satisfy
 * max_violation <= kCertificateTol. boundary_measure is the grid measure of
 * {t : | |s(t)| - 1 | <= kBoundaryBand}, positive in non-normal problems.
 */
struct PmpCertificate {
    Eigen::VectorXd q0;
    double max_violation = 0.0;
    double boundary_measure = 0.0;
};

/**
 * Searches for an initial costate whose switching function is consistent
 * with the sign pattern of u at every interval midpoint:
 *   u_k = +1        requires s(t_k) <= -1 + tol,
 *   u_k = -1        requires s(t_k) >=  1 - tol,
 *   u_k = 0         requires |s(t_k)| <= 1 + tol,
 *   u_k in (0, 1)   requires |s(t_k) + 1| <= tol,
 *   u_k in (-1, 0)  requires |s(t_k) - 1| <= tol.
 * Encoded as an LP in q0 with a margin objective; returns std::nullopt when
 * no consistent costate exists. Throws std::invalid_argument when u is not
 * feasible for the problem's dynamics (checked first).
 */
std::optional<PmpCertificate> find_certificate(const TranscribedProblem& problem,
                                               const ControlSignal& u);

/// Grid measure of {t_k : | |s(t_k)| - 1 | <= kBoundaryBand} at midpoints.
double normality_diagnostic(const CostateSpec& spec, double horizon, int n_intervals);

}  // namespace handsoff
