#include "handsoff/pmp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "handsoff/matexp.hpp"

namespace handsoff {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginCap = 1.0;

// exp(-A t_k) B at interval midpoints, via the semigroup recurrence.
Eigen::MatrixXd midpoint_modes(const LtiSystem& sys, double horizon, int n_intervals) {
    const double dt = horizon / static_cast<double>(n_intervals);
    const Eigen::MatrixXd step = expm(-sys.a_matrix() * dt);
    Eigen::MatrixXd modes(sys.dimension(), n_intervals);
    modes.col(0) = expm(-sys.a_matrix() * (dt / 2.0)) * sys.b_vector();
    for (int k = 1; k < n_intervals; ++k) {
        modes.col(k) = step * modes.col(k - 1);
    }
    return modes;
}

enum class SampleClass { plus_one, minus_one, zero, frac_pos, frac_neg };

SampleClass classify(double v) {
    if (std::abs(v - 1.0) <= kLatticeTol) return SampleClass::plus_one;
    if (std::abs(v + 1.0) <= kLatticeTol) return SampleClass::minus_one;
    if (std::abs(v) <= kLatticeTol) return SampleClass::zero;
    return v > 0.0 ? SampleClass::frac_pos : SampleClass::frac_neg;
}

}  // namespace

double switching_function(const CostateSpec& spec, double t) {
    if (spec.q0.size() != spec.system.dimension()) {
        throw std::invalid_argument("switching_function: q0 must have the system dimension");
    }
    const Eigen::MatrixXd transition = expm(-spec.system.a_matrix().transpose() * t);
    return spec.system.b_vector().dot(transition * spec.q0);
}

double hamiltonian_lp(const LtiSystem& sys, const Eigen::VectorXd& x, const Eigen::VectorXd& q,
                      double u, double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("hamiltonian_lp: p must lie in (0, 1]");
    }
    const double running_cost = u == 0.0 ? 0.0 : std::pow(std::abs(u), p);
    return running_cost + q.dot(sys.a_matrix() * x + sys.b_vector() * u);
}

std::vector<double> pointwise_argmin(double s, double p) {
    (void)p;  // the case split is the same for every p in (0, 1)
    if (s < -1.0) return {1.0};
    if (s == -1.0) return {0.0, 1.0};
    if (s < 1.0) return {0.0};
    if (s == 1.0) return {-1.0, 0.0};
    return {-1.0};
}

ControlSignal synthesize(const CostateSpec& spec, double horizon, int n_intervals) {
    if (spec.q0.size() != spec.system.dimension()) {
        throw std::invalid_argument("synthesize: q0 must have the system dimension");
    }
    const Eigen::MatrixXd modes = midpoint_modes(spec.system, horizon, n_intervals);
    Eigen::VectorXd values(n_intervals);
    for (int k = 0; k < n_intervals; ++k) {
        const double s = modes.col(k).dot(spec.q0);
        if (std::abs(std::abs(s) - 1.0) <= kSynthesisAmbiguityTol) {
            values[k] = 0.0;  // hands-off preference on the ambiguous set
        } else if (s < -1.0) {
            values[k] = 1.0;
        } else if (s > 1.0) {
            values[k] = -1.0;
        } else {
            values[k] = 0.0;
        }
    }
    return ControlSignal(horizon, std::move(values));
}

std::optional<PmpCertificate> find_certificate(const TranscribedProblem& problem,
                                               const ControlSignal& u) {
    const int n = problem.system.dimension();
    const int N = problem.n_intervals;
    if (u.n_intervals() != N || std::abs(u.horizon() - problem.horizon) > 1e-12) {
        throw std::invalid_argument("find_certificate: control grid does not match the problem");
    }

    // The candidate must actually solve the steering problem.
    const double residual =
        (problem.constraint.g * u.values() + problem.xi).cwiseAbs().maxCoeff();
    const double feas_tol = kLpFeasibilityTol * (1.0 + problem.xi.cwiseAbs().maxCoeff());
    if (residual > feas_tol || linf_norm(u) > 1.0 + kLatticeTol) {
        throw std::invalid_argument(
            "find_certificate: control is not feasible for the problem (infeasible candidate)");
    }

    const Eigen::MatrixXd modes = midpoint_modes(problem.system, problem.horizon, N);

    // Sign conditions as rows of C z <= d over z = (q0, delta), delta the
    // margin being maximized. Solved through the dual
    //   min d'y  s.t.  C'y = e_delta, y >= 0,
    // whose equality multipliers recover z; the dual keeps the basis at
    // size n+1 regardless of N.
    std::vector<Eigen::VectorXd> rows;
    std::vector<double> rhs;
    rows.reserve(2 * static_cast<size_t>(N) + 2);
    rhs.reserve(2 * static_cast<size_t>(N) + 2);
    auto add_row = [&](const Eigen::VectorXd& phi, double phi_sign, double delta_coeff,
                       double bound) {
        Eigen::VectorXd row(n + 1);
        row.head(n) = phi_sign * phi;
        row[n] = delta_coeff;
        rows.push_back(std::move(row));
        rhs.push_back(bound);
    };
    for (int k = 0; k < N; ++k) {
        const Eigen::VectorXd phi = modes.col(k);
        switch (classify(u[k])) {
            case SampleClass::plus_one:
                add_row(phi, +1.0, 1.0, -1.0 + kCertificateTol);
                break;
            case SampleClass::minus_one:
                add_row(phi, -1.0, 1.0, -1.0 + kCertificateTol);
                break;
            case SampleClass::zero:
                add_row(phi, +1.0, 1.0, 1.0 + kCertificateTol);
                add_row(phi, -1.0, 1.0, 1.0 + kCertificateTol);
                break;
            case SampleClass::frac_pos:
                add_row(phi, +1.0, 0.0, -1.0 + kCertificateTol);
                add_row(phi, -1.0, 0.0, 1.0 + kCertificateTol);
                break;
            case SampleClass::frac_neg:
                add_row(phi, +1.0, 0.0, 1.0 + kCertificateTol);
                add_row(phi, -1.0, 0.0, -1.0 + kCertificateTol);
                break;
        }
    }
    add_row(Eigen::VectorXd::Zero(n), 0.0, 1.0, kMarginCap);  // keeps the primal bounded
    add_row(Eigen::VectorXd::Zero(n), 0.0, -1.0, 0.0);        // delta >= 0

    const int n_rows = static_cast<int>(rows.size());
    LinearProgram dual;
    dual.cost.resize(n_rows);
    dual.eq_matrix.resize(n + 1, n_rows);
    for (int j = 0; j < n_rows; ++j) {
        dual.eq_matrix.col(j) = rows[static_cast<size_t>(j)];
        dual.cost[j] = rhs[static_cast<size_t>(j)];
    }
    dual.eq_rhs = Eigen::VectorXd::Unit(n + 1, n);
    dual.lower = Eigen::VectorXd::Zero(n_rows);
    dual.upper = Eigen::VectorXd::Constant(n_rows, kInf);

    const LpSolution lp = solve(dual);
    if (lp.status != LpStatus::optimal) {
        return std::nullopt;  // sign conditions are inconsistent
    }
    const Eigen::VectorXd q0 = lp.duals.head(n);

    double max_violation = 0.0;
    int boundary_count = 0;
    for (int k = 0; k < N; ++k) {
        const double s = modes.col(k).dot(q0);
        double violation = 0.0;
        switch (classify(u[k])) {
            case SampleClass::plus_one:
                violation = std::max(0.0, s + 1.0);
                break;
            case SampleClass::minus_one:
                violation = std::max(0.0, 1.0 - s);
                break;
            case SampleClass::zero:
                violation = std::max(0.0, std::abs(s) - 1.0);
                break;
            case SampleClass::frac_pos:
                violation = std::abs(s + 1.0);
                break;
            case SampleClass::frac_neg:
                violation = std::abs(s - 1.0);
                break;
        }
        max_violation = std::max(max_violation, violation);
        if (std::abs(std::abs(s) - 1.0) <= kBoundaryBand) ++boundary_count;
    }
    if (max_violation > kCertificateTol) {
        return std::nullopt;
    }
    PmpCertificate certificate;
    certificate.q0 = q0;
    certificate.max_violation = max_violation;
    certificate.boundary_measure =
        (problem.horizon / static_cast<double>(N)) * static_cast<double>(boundary_count);
    return certificate;
}

double normality_diagnostic(const CostateSpec& spec, double horizon, int n_intervals) {
    if (spec.q0.size() != spec.system.dimension()) {
        throw std::invalid_argument("normality_diagnostic: q0 must have the system dimension");
    }
    const Eigen::MatrixXd modes = midpoint_modes(spec.system, horizon, n_intervals);
    int pinned = 0;
    for (int k = 0; k < n_intervals; ++k) {
        const double s = modes.col(k).dot(spec.q0);
        if (std::abs(std::abs(s) - 1.0) <= kBoundaryBand) ++pinned;
    }
    return (horizon / static_cast<double>(n_intervals)) * static_cast<double>(pinned);
}

}  // namespace handsoff
