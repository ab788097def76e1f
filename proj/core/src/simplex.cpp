#include "handsoff/simplex.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <stdexcept>

namespace handsoff {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-10;      // minimum magnitude for a ratio-test pivot
constexpr double kDegenerateStep = 1e-11;
constexpr double kDriveOutTol = 1e-7;    // pivot magnitude when expelling artificials

}  // namespace

void LinearProgram::validate() const {
    const auto m = cost.size();
    if (eq_matrix.cols() != m || lower.size() != m || upper.size() != m) {
        throw std::invalid_argument("LinearProgram: inconsistent column dimensions");
    }
    if (eq_matrix.rows() != eq_rhs.size()) {
        throw std::invalid_argument("LinearProgram: inconsistent row dimensions");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        if (lower[j] > upper[j]) {
            throw std::invalid_argument("LinearProgram: lower bound exceeds upper bound");
        }
        if (std::isnan(lower[j]) || std::isnan(upper[j])) {
            throw std::invalid_argument("LinearProgram: NaN bound");
        }
    }
    if (!cost.allFinite() || !eq_matrix.allFinite() || !eq_rhs.allFinite()) {
        throw std::invalid_argument("LinearProgram: data must be finite");
    }
}

void SimplexSolver::load(const LinearProgram& lp) {
    n_struct_ = lp.n_vars();
    n_rows_ = lp.n_rows();
    n_total_ = n_struct_ + n_rows_;

    work_a_.resize(n_rows_, n_total_);
    work_a_.leftCols(n_struct_) = lp.eq_matrix;
    work_a_.rightCols(n_rows_).setZero();
    rhs_ = lp.eq_rhs;

    lower_.resize(n_total_);
    upper_.resize(n_total_);
    lower_.head(n_struct_) = lp.lower;
    upper_.head(n_struct_) = lp.upper;
    lower_.tail(n_rows_).setZero();
    upper_.tail(n_rows_).setConstant(kInf);

    x_.setZero(n_total_);
    state_.assign(static_cast<size_t>(n_total_), VarState::free_zero);
    for (int j = 0; j < n_struct_; ++j) {
        if (std::isfinite(lower_[j])) {
            x_[j] = lower_[j];
            state_[j] = VarState::at_lower;
        } else if (std::isfinite(upper_[j])) {
            x_[j] = upper_[j];
            state_[j] = VarState::at_upper;
        } else {
            x_[j] = 0.0;
            state_[j] = VarState::free_zero;
        }
    }

    // Artificial columns are signed unit vectors so they start feasible.
    Eigen::VectorXd residual = rhs_;
    for (int j = 0; j < n_struct_; ++j) {
        if (x_[j] != 0.0) residual -= work_a_.col(j) * x_[j];
    }
    basis_.assign(static_cast<size_t>(n_rows_), -1);
    binv_.setZero(n_rows_, n_rows_);
    for (int i = 0; i < n_rows_; ++i) {
        const double sign = residual[i] >= 0.0 ? 1.0 : -1.0;
        const int art = n_struct_ + i;
        work_a_(i, art) = sign;
        x_[art] = std::abs(residual[i]);
        state_[static_cast<size_t>(art)] = VarState::basic;
        basis_[static_cast<size_t>(i)] = art;
        binv_(i, i) = sign;
    }

    pivots_since_refactor_ = 0;
    iterations_ = 0;
}

void SimplexSolver::refactor() {
    Eigen::MatrixXd basis_matrix(n_rows_, n_rows_);
    for (int i = 0; i < n_rows_; ++i) {
        basis_matrix.col(i) = work_a_.col(basis_[static_cast<size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(basis_matrix);
    if (!lu.isInvertible()) {
        throw std::runtime_error("SimplexSolver: singular basis matrix");
    }
    binv_ = lu.inverse();
    pivots_since_refactor_ = 0;
}

void SimplexSolver::recompute_basics() {
    Eigen::VectorXd residual = rhs_;
    for (int j = 0; j < n_total_; ++j) {
        if (state_[static_cast<size_t>(j)] != VarState::basic && x_[j] != 0.0) {
            residual -= work_a_.col(j) * x_[j];
        }
    }
    const Eigen::VectorXd xb = binv_ * residual;
    for (int i = 0; i < n_rows_; ++i) {
        x_[basis_[static_cast<size_t>(i)]] = xb[i];
    }
}

bool SimplexSolver::price(int& entering, int& direction) const {
    Eigen::VectorXd basic_cost(n_rows_);
    for (int i = 0; i < n_rows_; ++i) {
        basic_cost[i] = cost_[basis_[static_cast<size_t>(i)]];
    }
    const Eigen::VectorXd y = binv_.transpose() * basic_cost;

    entering = -1;
    direction = 0;
    double best_score = kLpOptimalityTol;
    for (int j = 0; j < n_total_; ++j) {
        const auto st = state_[static_cast<size_t>(j)];
        if (st == VarState::basic) continue;
        if (upper_[j] - lower_[j] <= 0.0) continue;  // fixed, including pinned artificials
        const double reduced = cost_[j] - y.dot(work_a_.col(j));
        int dir = 0;
        if ((st == VarState::at_lower || st == VarState::free_zero) &&
            reduced < -kLpOptimalityTol) {
            dir = +1;
        } else if ((st == VarState::at_upper || st == VarState::free_zero) &&
                   reduced > kLpOptimalityTol) {
            dir = -1;
        } else {
            continue;
        }
        if (bland_) {  // lowest eligible index
            entering = j;
            direction = dir;
            return true;
        }
        if (std::abs(reduced) > best_score) {  // Dantzig, ties to lowest index
            best_score = std::abs(reduced);
            entering = j;
            direction = dir;
        }
    }
    return entering >= 0;
}

void SimplexSolver::pivot(int entering, int direction) {
    const Eigen::VectorXd w = binv_ * work_a_.col(entering);

    const double gap = upper_[entering] - lower_[entering];
    double best_t = std::isfinite(gap) ? gap : kInf;
    int leave_pos = -1;  // -1 means bound flip
    bool leave_at_upper = false;
    double leave_rate = 0.0;

    for (int i = 0; i < n_rows_; ++i) {
        const int bi = basis_[static_cast<size_t>(i)];
        const double rate = -direction * w[i];
        double t;
        bool hits_upper;
        if (rate < -kPivotTol && lower_[bi] > -kInf) {
            t = (x_[bi] - lower_[bi]) / (-rate);
            hits_upper = false;
        } else if (rate > kPivotTol && upper_[bi] < kInf) {
            t = (upper_[bi] - x_[bi]) / rate;
            hits_upper = true;
        } else {
            continue;
        }
        if (t < 0.0) t = 0.0;

        bool take = false;
        if (t < best_t) {
            take = true;
        } else if (t == best_t) {
            if (leave_pos < 0) {
                take = true;  // prefer a basis exchange over a bound flip on exact ties
            } else if (bland_) {
                take = bi < basis_[static_cast<size_t>(leave_pos)];
            } else if (std::abs(rate) > std::abs(leave_rate)) {
                take = true;
            } else if (std::abs(rate) == std::abs(leave_rate)) {
                take = bi < basis_[static_cast<size_t>(leave_pos)];
            }
        }
        if (take) {
            best_t = t;
            leave_pos = i;
            leave_at_upper = hits_upper;
            leave_rate = rate;
        }
    }

    if (!std::isfinite(best_t)) {
        step_was_unbounded_ = true;
        return;
    }

    degenerate_run_ = best_t <= kDegenerateStep ? degenerate_run_ + 1 : 0;
    if (degenerate_run_ >= kLpBlandThreshold) bland_ = true;

    const double start = state_[static_cast<size_t>(entering)] == VarState::at_upper
                             ? upper_[entering]
                             : (state_[static_cast<size_t>(entering)] == VarState::at_lower
                                    ? lower_[entering]
                                    : 0.0);

    if (leave_pos < 0) {
        // Entering variable runs bound to bound; basis unchanged.
        for (int i = 0; i < n_rows_; ++i) {
            x_[basis_[static_cast<size_t>(i)]] += -direction * w[i] * best_t;
        }
        x_[entering] = direction > 0 ? upper_[entering] : lower_[entering];
        state_[static_cast<size_t>(entering)] =
            direction > 0 ? VarState::at_upper : VarState::at_lower;
        return;
    }

    const int leaving = basis_[static_cast<size_t>(leave_pos)];
    for (int i = 0; i < n_rows_; ++i) {
        x_[basis_[static_cast<size_t>(i)]] += -direction * w[i] * best_t;
    }
    x_[entering] = start + direction * best_t;
    x_[leaving] = leave_at_upper ? upper_[leaving] : lower_[leaving];  // snap exactly
    state_[static_cast<size_t>(leaving)] =
        leave_at_upper ? VarState::at_upper : VarState::at_lower;
    state_[static_cast<size_t>(entering)] = VarState::basic;
    basis_[static_cast<size_t>(leave_pos)] = entering;

    // Product-form update of the explicit inverse.
    const double pivot_value = w[leave_pos];
    binv_.row(leave_pos) /= pivot_value;
    for (int i = 0; i < n_rows_; ++i) {
        if (i != leave_pos && w[i] != 0.0) {
            binv_.row(i) -= w[i] * binv_.row(leave_pos);
        }
    }
    ++pivots_since_refactor_;
}

LpStatus SimplexSolver::run_phase(bool phase_one) {
    bland_ = false;
    degenerate_run_ = 0;
    const long iteration_cap = 20000L + 100L * n_total_;
    long local_iterations = 0;
    for (;;) {
        if (++local_iterations > iteration_cap) {
            throw std::runtime_error("SimplexSolver: iteration limit exceeded");
        }
        if (pivots_since_refactor_ >= kLpRefactorInterval) {
            refactor();
            recompute_basics();
        }
        int entering, direction;
        if (!price(entering, direction)) {
            // Confirm optimality on a fresh factorization.
            if (pivots_since_refactor_ > 0) {
                refactor();
                recompute_basics();
                continue;
            }
            return LpStatus::optimal;
        }
        step_was_unbounded_ = false;
        pivot(entering, direction);
        ++iterations_;
        if (step_was_unbounded_) {
            return phase_one ? LpStatus::infeasible : LpStatus::unbounded;
        }
    }
}

double SimplexSolver::artificial_infeasibility() const {
    double worst = 0.0;
    for (int i = 0; i < n_rows_; ++i) {
        worst = std::max(worst, std::abs(x_[n_struct_ + i]));
    }
    return worst;
}

LpSolution SimplexSolver::solve(const LinearProgram& lp) {
    lp.validate();
    load(lp);

    const double feas_tol =
        kLpFeasibilityTol * (1.0 + (lp.eq_rhs.size() ? lp.eq_rhs.cwiseAbs().maxCoeff() : 0.0));

    LpSolution out;
    out.values = Eigen::VectorXd::Zero(n_struct_);
    out.duals = Eigen::VectorXd::Zero(n_rows_);

    // Phase 1: minimize the artificial sum.
    cost_.setZero(n_total_);
    cost_.tail(n_rows_).setOnes();
    run_phase(true);

    auto finish = [&](LpStatus status) {
        refactor();
        recompute_basics();
        Eigen::VectorXd basic_cost(n_rows_);
        for (int i = 0; i < n_rows_; ++i) basic_cost[i] = cost_[basis_[static_cast<size_t>(i)]];
        out.status = status;
        out.values = x_.head(n_struct_);
        out.objective = lp.cost.dot(out.values);
        out.duals = binv_.transpose() * basic_cost;
        out.basis.clear();
        for (int i = 0; i < n_rows_; ++i) {
            if (basis_[static_cast<size_t>(i)] < n_struct_) {
                out.basis.push_back(basis_[static_cast<size_t>(i)]);
            }
        }
        std::sort(out.basis.begin(), out.basis.end());
        out.iterations = iterations_;
        out.max_residual =
            lp.eq_rhs.size()
                ? (lp.eq_matrix * out.values - lp.eq_rhs).cwiseAbs().maxCoeff()
                : 0.0;
        return out;
    };

    if (artificial_infeasibility() > feas_tol) {
        return finish(LpStatus::infeasible);
    }

    // Expel artificials still in the basis, then pin all of them at zero.
    for (int i = 0; i < n_rows_; ++i) {
        if (basis_[static_cast<size_t>(i)] < n_struct_) continue;
        int replacement = -1;
        double best_magnitude = kDriveOutTol;
        for (int j = 0; j < n_struct_; ++j) {
            if (state_[static_cast<size_t>(j)] == VarState::basic) continue;
            const double magnitude = std::abs(binv_.row(i).dot(work_a_.col(j)));
            if (magnitude > best_magnitude) {
                best_magnitude = magnitude;
                replacement = j;
            }
        }
        if (replacement < 0) continue;  // dependent row; the pinned artificial stays
        const int artificial = basis_[static_cast<size_t>(i)];
        const Eigen::VectorXd w = binv_ * work_a_.col(replacement);
        binv_.row(i) /= w[i];
        for (int k = 0; k < n_rows_; ++k) {
            if (k != i && w[k] != 0.0) binv_.row(k) -= w[k] * binv_.row(i);
        }
        basis_[static_cast<size_t>(i)] = replacement;
        state_[static_cast<size_t>(replacement)] = VarState::basic;
        state_[static_cast<size_t>(artificial)] = VarState::at_lower;
        x_[artificial] = 0.0;
        ++pivots_since_refactor_;
    }
    lower_.tail(n_rows_).setZero();
    upper_.tail(n_rows_).setZero();
    refactor();
    recompute_basics();

    // Phase 2: original objective, artificials held at zero.
    cost_.setZero(n_total_);
    cost_.head(n_struct_) = lp.cost;
    const LpStatus phase2 = run_phase(false);
    return finish(phase2);
}

LpSolution solve(const LinearProgram& lp) {
    SimplexSolver solver;
    return solver.solve(lp);
}

FeasibilityReport check_feasible(const Eigen::MatrixXd& eq_matrix, const Eigen::VectorXd& eq_rhs,
                                 const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    LinearProgram lp;
    lp.cost = Eigen::VectorXd::Zero(eq_matrix.cols());
    lp.eq_matrix = eq_matrix;
    lp.eq_rhs = eq_rhs;
    lp.lower = lower;
    lp.upper = upper;
    const LpSolution solution = solve(lp);
    return FeasibilityReport{solution.status == LpStatus::optimal, solution.max_residual};
}

}  // namespace handsoff
