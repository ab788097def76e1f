#include "handsoff/solver.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace handsoff {
namespace {

constexpr std::int8_t kUnpinned = 127;

// Split LP over v = [u+; u-], v in [0,1]^(2N), rows G(u+ - u-) = -xi.
// Per-sample pins restrict v to encode a lattice value; pin_l1 appends the
// row dt * sum(v) = *pin_l1, freezing the L1 value.
LinearProgram split_lp(const TranscribedProblem& pb, const Eigen::VectorXd& plus_cost,
                       const Eigen::VectorXd& minus_cost,
                       const std::vector<std::int8_t>* pins, const double* pin_l1) {
    const int n = pb.system.dimension();
    const int N = pb.n_intervals;
    const int rows = n + (pin_l1 ? 1 : 0);

    LinearProgram lp;
    lp.cost.resize(2 * N);
    lp.cost.head(N) = plus_cost;
    lp.cost.tail(N) = minus_cost;
    lp.eq_matrix.resize(rows, 2 * N);
    lp.eq_matrix.topLeftCorner(n, N) = pb.constraint.g;
    lp.eq_matrix.topRightCorner(n, N) = -pb.constraint.g;
    lp.eq_rhs.resize(rows);
    lp.eq_rhs.head(n) = -pb.xi;
    if (pin_l1) {
        lp.eq_matrix.row(n).setConstant(pb.dt());
        lp.eq_rhs[n] = *pin_l1;
    }
    lp.lower = Eigen::VectorXd::Zero(2 * N);
    lp.upper = Eigen::VectorXd::Ones(2 * N);
    if (pins) {
        for (int k = 0; k < N; ++k) {
            const std::int8_t pin = (*pins)[static_cast<size_t>(k)];
            if (pin == kUnpinned) continue;
            const double plus = pin > 0 ? 1.0 : 0.0;
            const double minus = pin < 0 ? 1.0 : 0.0;
            lp.lower[k] = lp.upper[k] = plus;
            lp.lower[N + k] = lp.upper[N + k] = minus;
        }
    }
    return lp;
}

ControlSignal signal_from_split(const TranscribedProblem& pb, const Eigen::VectorXd& v) {
    const int N = pb.n_intervals;
    Eigen::VectorXd u = v.head(N) - v.tail(N);
    return ControlSignal(pb.horizon, std::move(u));
}

SparseSolveResult make_result(const TranscribedProblem& pb, ControlSignal control,
                              double l1_value, SolveMethod method, int iterations) {
    SparseSolveResult out;
    out.status = SolveStatus::ok;
    out.control = std::move(control);
    out.l1_value = l1_value;
    out.l0_value = l0_norm(out.control, kZeroTol);
    out.fractional_count = fractional_sample_count(out.control);
    out.method = method;
    out.iterations = iterations;
    (void)pb;
    return out;
}

SparseSolveResult not_reachable_result(SolveMethod method, int iterations) {
    SparseSolveResult out;
    out.status = SolveStatus::not_reachable;
    out.method = method;
    out.iterations = iterations;
    return out;
}

std::vector<int> support_of(const ControlSignal& u) {
    std::vector<int> support;
    for (int k = 0; k < u.n_intervals(); ++k) {
        if (std::abs(u[k]) > kZeroTol) support.push_back(k);
    }
    return support;
}

// Support centroid of |u|; the concentration objective measures spread about it.
double support_centroid(const ControlSignal& u) {
    double mass = 0.0, moment = 0.0;
    for (int k = 0; k < u.n_intervals(); ++k) {
        const double a = std::abs(u[k]);
        mass += a;
        moment += a * u.interval_midpoint(k);
    }
    return moment / mass;
}

Eigen::VectorXd concentration_cost(const TranscribedProblem& pb, double centroid) {
    Eigen::VectorXd cost(pb.n_intervals);
    for (int k = 0; k < pb.n_intervals; ++k) {
        const double d = pb.dt() * (static_cast<double>(k) + 0.5) - centroid;
        cost[k] = d * d;
    }
    return cost;
}

struct ReweightOutcome {
    LpSolution lp;
    ControlSignal control;
    int iterations = 0;
};

// Weighted-L1 iteration: w <- (|u| + eps)^(p-1), stop when the support is
// stable or max_iter is hit. Keeps the best iterate by (l0, then l1).
// start may be empty (then weights start at 1); pin_l1 optionally freezes
// the L1 value of every iterate.
std::optional<ReweightOutcome> reweight_iterate(const TranscribedProblem& pb, double p,
                                                int max_iter, double epsilon,
                                                const ControlSignal* start,
                                                const double* pin_l1) {
    const int N = pb.n_intervals;
    const double dt = pb.dt();
    Eigen::VectorXd weights = Eigen::VectorXd::Ones(N);
    if (start) {
        for (int k = 0; k < N; ++k) {
            weights[k] = std::pow(std::abs((*start)[k]) + epsilon, p - 1.0);
        }
    }

    std::optional<ReweightOutcome> best;
    double best_l0 = std::numeric_limits<double>::infinity();
    double best_l1 = std::numeric_limits<double>::infinity();
    std::vector<int> previous_support;
    SimplexSolver solver;
    int done = 0;
    for (int it = 1; it <= max_iter; ++it) {
        const Eigen::VectorXd cost = dt * weights;
        const LpSolution lp = solver.solve(split_lp(pb, cost, cost, nullptr, pin_l1));
        if (lp.status != LpStatus::optimal) {
            if (best) break;
            return std::nullopt;
        }
        ControlSignal u = signal_from_split(pb, lp.values);
        const double l0 = l0_norm(u, kZeroTol);
        const double l1 = l1_norm(u);
        done = it;
        if (l0 < best_l0 - 1e-15 || (l0 <= best_l0 + 1e-15 && l1 < best_l1 - 1e-15)) {
            best_l0 = l0;
            best_l1 = l1;
            best = ReweightOutcome{lp, u, it};
        }
        if (l0 == 0.0) break;  // the empty support cannot improve
        std::vector<int> support = support_of(u);
        if (it > 1 && support == previous_support) break;
        previous_support = std::move(support);
        for (int k = 0; k < N; ++k) {
            weights[k] = std::pow(std::abs(u[k]) + epsilon, p - 1.0);
        }
    }
    if (best) best->iterations = done;
    return best;
}

}  // namespace

TranscribedProblem transcribe(const LtiSystem& sys, const Eigen::VectorXd& xi, double horizon,
                              int n_intervals) {
    if (xi.size() != sys.dimension()) {
        throw std::invalid_argument("transcribe: xi must have the system dimension");
    }
    if (!xi.allFinite()) {
        throw std::invalid_argument("transcribe: xi must be finite");
    }
    return TranscribedProblem{sys, xi, horizon, n_intervals,
                              build_constraint_matrix(sys, horizon, n_intervals)};
}

int fractional_sample_count(const ControlSignal& u, double lattice_tol) {
    int count = 0;
    for (int k = 0; k < u.n_intervals(); ++k) {
        const double v = u[k];
        const double gap = std::min({std::abs(v), std::abs(v - 1.0), std::abs(v + 1.0)});
        if (gap > lattice_tol) ++count;
    }
    return count;
}

LinearProgram l1_split_lp(const TranscribedProblem& problem) {
    const Eigen::VectorXd cost =
        Eigen::VectorXd::Constant(problem.n_intervals, problem.dt());
    return split_lp(problem, cost, cost, nullptr, nullptr);
}

LinearProgram weighted_l1_split_lp(const TranscribedProblem& problem,
                                   const Eigen::VectorXd& weights) {
    if (weights.size() != problem.n_intervals) {
        throw std::invalid_argument("weighted_l1_split_lp: one weight per interval required");
    }
    const Eigen::VectorXd cost = problem.dt() * weights;
    return split_lp(problem, cost, cost, nullptr, nullptr);
}

ControlSignal control_from_split(const TranscribedProblem& problem,
                                 const Eigen::VectorXd& split_values) {
    return signal_from_split(problem, split_values);
}

SparseSolveResult solve_l1(const TranscribedProblem& problem) {
    SimplexSolver solver;
    const LpSolution lp = solver.solve(l1_split_lp(problem));
    if (lp.status == LpStatus::infeasible) {
        return not_reachable_result(SolveMethod::l1_vertex, lp.iterations);
    }
    if (lp.status == LpStatus::unbounded) {
        throw std::runtime_error("solve_l1: unbounded LP from a box-constrained problem");
    }
    return make_result(problem, signal_from_split(problem, lp.values), lp.objective,
                       SolveMethod::l1_vertex, lp.iterations);
}

SparseSolveResult solve_max_handsoff(const TranscribedProblem& problem) {
    SparseSolveResult stage1 = solve_l1(problem);
    if (stage1.status != SolveStatus::ok) return stage1;
    if (stage1.l1_value <= kLatticeTol) return stage1;  // zero control is the optimum

    const int N = problem.n_intervals;
    const double v1 = stage1.l1_value;
    int iterations = stage1.iterations;

    // Concentrate the support: over the L1-optimal face, minimize the second
    // moment of |u| about the stage-1 centroid. Unique minimizers sit on a
    // contiguous block, which is also where exact lattice polishing succeeds.
    const Eigen::VectorXd spread = concentration_cost(problem, support_centroid(stage1.control));
    SimplexSolver solver;
    LpSolution current = solver.solve(split_lp(problem, spread, spread, nullptr, &v1));
    if (current.status != LpStatus::optimal) {
        // Numerically stuck face; fall back to the plain vertex.
        current = solver.solve(l1_split_lp(problem));
    }
    iterations += current.iterations;
    ControlSignal concentrated = signal_from_split(problem, current.values);

    // Lattice polish: pin fractional samples one at a time (0 first, then the
    // nearer bound), re-solving the pinned LP; keep a pin only when the
    // re-solve stays feasible at the pinned L1 value and strictly shrinks the
    // fractional set.
    std::vector<std::int8_t> pins(static_cast<size_t>(N), kUnpinned);
    ControlSignal polished = concentrated;
    int fractional = fractional_sample_count(polished);
    bool progressed = true;
    while (fractional > 0 && progressed) {
        progressed = false;
        for (int k = 0; k < N && !progressed; ++k) {
            const double v = polished[k];
            const double gap = std::min({std::abs(v), std::abs(v - 1.0), std::abs(v + 1.0)});
            if (gap <= kLatticeTol || pins[static_cast<size_t>(k)] != kUnpinned) continue;
            const std::int8_t nearer = v >= 0.0 ? 1 : -1;
            const std::int8_t candidates[3] = {0, nearer, static_cast<std::int8_t>(-nearer)};
            for (const std::int8_t candidate : candidates) {
                pins[static_cast<size_t>(k)] = candidate;
                const LpSolution trial =
                    solver.solve(split_lp(problem, spread, spread, &pins, &v1));
                iterations += trial.iterations;
                if (trial.status == LpStatus::optimal) {
                    ControlSignal u = signal_from_split(problem, trial.values);
                    const int trial_fractional = fractional_sample_count(u);
                    if (trial_fractional < fractional) {
                        polished = std::move(u);
                        fractional = trial_fractional;
                        progressed = true;
                        break;
                    }
                }
                pins[static_cast<size_t>(k)] = kUnpinned;
            }
        }
    }

    if (fractional == 0) {
        SparseSolveResult out =
            make_result(problem, std::move(polished), v1, SolveMethod::l1_vertex, iterations);
        return out;
    }

    // No exact bang-off-bang control on this grid; refine the concentrated
    // iterate by reweighting (L1 value still pinned) and report honestly.
    const auto refined = reweight_iterate(problem, kDefaultReweightP, kDefaultReweightMaxIter,
                                          kDefaultReweightEpsilon, &concentrated, &v1);
    ControlSignal result_control =
        refined && l0_norm(refined->control, kZeroTol) <= l0_norm(concentrated, kZeroTol)
            ? refined->control
            : concentrated;
    SparseSolveResult out = make_result(problem, std::move(result_control), v1,
                                        SolveMethod::reweighted_lp, iterations);
    return out;
}

SparseSolveResult solve_reweighted_lp(const TranscribedProblem& problem, double p, int max_iter,
                                      double epsilon) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("solve_reweighted_lp: p must lie in (0, 1)");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("solve_reweighted_lp: epsilon must be positive");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("solve_reweighted_lp: max_iter must be at least 1");
    }
    const auto outcome = reweight_iterate(problem, p, max_iter, epsilon, nullptr, nullptr);
    if (!outcome) {
        return not_reachable_result(SolveMethod::reweighted_lp, 0);
    }
    SparseSolveResult out = make_result(problem, outcome->control, l1_norm(outcome->control),
                                        SolveMethod::reweighted_lp, outcome->iterations);
    return out;
}

std::optional<double> value(const TranscribedProblem& problem) {
    const SparseSolveResult result = solve_l1(problem);
    if (result.status != SolveStatus::ok) return std::nullopt;
    return result.l1_value;
}

bool is_reachable(const LtiSystem& sys, const Eigen::VectorXd& xi, double horizon,
                  int n_intervals) {
    const TranscribedProblem pb = transcribe(sys, xi, horizon, n_intervals);
    const LinearProgram lp = l1_split_lp(pb);
    return check_feasible(lp.eq_matrix, lp.eq_rhs, lp.lower, lp.upper).feasible;
}

}  // namespace handsoff
