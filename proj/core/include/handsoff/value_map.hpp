#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

#include "handsoff/lti_system.hpp"
#include "handsoff/solver.hpp"

namespace handsoff {

/// Uniform samples of one grid axis, endpoints included.
struct AxisSpec {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    double coord(int i) const {
        if (count <= 1) return min;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct GridSpec {
    AxisSpec axis1;
    AxisSpec axis2;  // count 1 for one-dimensional systems
};

/**
 * @brief Samples of the value function V over a state grid. Unreachable
 * points carry an empty optional, never a sentinel number. Values are stored
 * row-major with axis1 as the outer index.
 */
struct ValueField {
    GridSpec grid;
    double horizon = 0.0;
    int n_intervals = 0;
    std::vector<std::optional<double>> values;

    int index(int i, int j) const { return i * grid.axis2.count + j; }
    const std::optional<double>& at(int i, int j) const {
        return values[static_cast<size_t>(index(i, j))];
    }
};

/**
 * One L1 solve per grid point (V = V1 on the reachable set). Supports state
 * dimension 1 (axis2 must have count 1) and 2; higher dimensions are
 * rejected. The result is assembled in index order, so any worker count
 * produces the identical field.
 */
ValueField sample_value_field(const LtiSystem& sys, const GridSpec& grid, double horizon,
                              int n_intervals, int workers = 1);

/**
 * Draws random reachable pairs (xi, eta) from the sample box plus lambda in
 * (0, 1), and measures V((1-lambda) xi + lambda eta) against the chord by
 * direct re-solves. Returns the maximum convexity violation over all trials
 * (<= 0 up to LP tolerance, since V is an LP value in its right-hand side).
 */
double convexity_probe(const LtiSystem& sys, double horizon, int n_intervals,
                       const GridSpec& sample_box, int trials, std::uint64_t seed);

/// Pair of adjacent grid points bracketing the reachable-set boundary.
struct BoundaryCell {
    int i0 = 0, j0 = 0;
    int i1 = 0, j1 = 0;
};

/**
 * Cells straddling {V = T}: one endpoint reachable with V < T - eps_b and
 * the adjacent endpoint unreachable or with V >= T - eps_b, eps_b = 2 dt.
 * Throws std::invalid_argument when (A, B) is not controllable, since only
 * then is the boundary the V = T level set.
 */
std::vector<BoundaryCell> boundary_estimate(const LtiSystem& sys, const ValueField& field);

struct ContinuityPoint {
    Eigen::VectorXd point;
    double oscillation = 0.0;
    double dual_norm = 0.0;  // largest ||y||_2 among the solves at this point
    bool skipped = false;    // some neighbor left the reachable set
};

struct ContinuityProbe {
    double max_oscillation = 0.0;
    double lipschitz_estimate = 0.0;  // max dual norm over non-skipped points
    std::vector<ContinuityPoint> points;
};

/**
 * Evaluates V at each probe point and at equally spaced surrounding points
 * on the circle of the given radius (segment endpoints in dimension 1);
 * reports the largest |V(xi + delta) - V(xi)| per point together with a
 * Lipschitz estimate taken from the LP duals. Points whose neighbors leave
 * the reachable set are skipped and flagged.
 */
ContinuityProbe continuity_probe(const LtiSystem& sys, const std::vector<Eigen::VectorXd>& points,
                                 double radius, double horizon, int n_intervals);

}  // namespace handsoff
