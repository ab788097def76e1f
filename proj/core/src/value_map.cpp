#include "handsoff/value_map.hpp"

#include <cmath>
#include <algorithm>
#include <random>
#include <stdexcept>
#include <thread>

namespace handsoff {
namespace {

std::optional<double> value_at(const LtiSystem& sys, const Eigen::VectorXd& xi, double horizon,
                               int n_intervals) {
    return value(transcribe(sys, xi, horizon, n_intervals));
}

Eigen::VectorXd grid_point(const LtiSystem& sys, const GridSpec& grid, int i, int j) {
    Eigen::VectorXd xi(sys.dimension());
    xi[0] = grid.axis1.coord(i);
    if (sys.dimension() == 2) xi[1] = grid.axis2.coord(j);
    return xi;
}

// Value plus the euclidean norm of the LP duals (a subgradient bound for V).
struct ValueWithDual {
    std::optional<double> value;
    double dual_norm = 0.0;
};

ValueWithDual value_with_dual(const LtiSystem& sys, const Eigen::VectorXd& xi, double horizon,
                              int n_intervals) {
    const TranscribedProblem pb = transcribe(sys, xi, horizon, n_intervals);
    SimplexSolver solver;
    const LpSolution lp = solver.solve(l1_split_lp(pb));
    if (lp.status != LpStatus::optimal) return {};
    return ValueWithDual{lp.objective, lp.duals.norm()};
}

}  // namespace

ValueField sample_value_field(const LtiSystem& sys, const GridSpec& grid, double horizon,
                              int n_intervals, int workers) {
    if (sys.dimension() > 2) {
        throw std::invalid_argument("sample_value_field: only 1- and 2-D state grids supported");
    }
    if (sys.dimension() == 1 && grid.axis2.count != 1) {
        throw std::invalid_argument("sample_value_field: 1-D system needs axis2.count == 1");
    }
    if (grid.axis1.count < 1 || grid.axis2.count < 1) {
        throw std::invalid_argument("sample_value_field: axis counts must be positive");
    }
    ValueField field;
    field.grid = grid;
    field.horizon = horizon;
    field.n_intervals = n_intervals;
    const int total = grid.axis1.count * grid.axis2.count;
    field.values.assign(static_cast<size_t>(total), std::nullopt);

    const int n_workers = std::max(1, std::min(workers, total));
    auto run_chunk = [&](int begin, int end) {
        for (int idx = begin; idx < end; ++idx) {
            const int i = idx / grid.axis2.count;
            const int j = idx % grid.axis2.count;
            field.values[static_cast<size_t>(idx)] =
                value_at(sys, grid_point(sys, grid, i, j), horizon, n_intervals);
        }
    };
    if (n_workers == 1) {
        run_chunk(0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_workers));
        const int chunk = (total + n_workers - 1) / n_workers;
        for (int w = 0; w < n_workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_chunk, begin, end);
        }
        for (auto& t : pool) t.join();
    }
    return field;
}

double convexity_probe(const LtiSystem& sys, double horizon, int n_intervals,
                       const GridSpec& sample_box, int trials, std::uint64_t seed) {
    if (trials < 1) {
        throw std::invalid_argument("convexity_probe: trials must be at least 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto draw_coord = [&](const AxisSpec& axis) {
        return axis.min + (axis.max - axis.min) * unit(rng);
    };
    auto draw_reachable = [&](double& value_out) {
        for (int attempt = 0; attempt < 10000; ++attempt) {
            Eigen::VectorXd xi(sys.dimension());
            xi[0] = draw_coord(sample_box.axis1);
            if (sys.dimension() >= 2) xi[1] = draw_coord(sample_box.axis2);
            const auto v = value_at(sys, xi, horizon, n_intervals);
            if (v) {
                value_out = *v;
                return xi;
            }
        }
        throw std::runtime_error("convexity_probe: could not draw a reachable state");
    };

    double max_violation = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        double v_xi = 0.0, v_eta = 0.0;
        const Eigen::VectorXd xi = draw_reachable(v_xi);
        const Eigen::VectorXd eta = draw_reachable(v_eta);
        const double lambda = unit(rng);
        const Eigen::VectorXd mid = (1.0 - lambda) * xi + lambda * eta;
        const auto v_mid = value_at(sys, mid, horizon, n_intervals);
        // A convex combination of reachable states is reachable; treat a
        // failed mid solve as an outright violation rather than crashing.
        const double violation = v_mid
                                     ? *v_mid - ((1.0 - lambda) * v_xi + lambda * v_eta)
                                     : std::numeric_limits<double>::infinity();
        max_violation = std::max(max_violation, violation);
    }
    return max_violation;
}

std::vector<BoundaryCell> boundary_estimate(const LtiSystem& sys, const ValueField& field) {
    if (!is_controllable(sys)) {
        throw std::invalid_argument(
            "boundary_estimate: (A, B) must be controllable for the V = T boundary "
            "characterization");
    }
    const double eps_b = 2.0 * field.horizon / static_cast<double>(field.n_intervals);
    const double threshold = field.horizon - eps_b;

    auto interior = [&](int i, int j) {
        const auto& v = field.at(i, j);
        return v.has_value() && *v < threshold;
    };
    auto boundary_or_out = [&](int i, int j) {
        const auto& v = field.at(i, j);
        return !v.has_value() || *v >= threshold;
    };

    std::vector<BoundaryCell> cells;
    for (int i = 0; i < field.grid.axis1.count; ++i) {
        for (int j = 0; j < field.grid.axis2.count; ++j) {
            if (i + 1 < field.grid.axis1.count) {
                if (interior(i, j) != interior(i + 1, j) &&
                    (boundary_or_out(i, j) || boundary_or_out(i + 1, j))) {
                    cells.push_back(BoundaryCell{i, j, i + 1, j});
                }
            }
            if (j + 1 < field.grid.axis2.count) {
                if (interior(i, j) != interior(i, j + 1) &&
                    (boundary_or_out(i, j) || boundary_or_out(i, j + 1))) {
                    cells.push_back(BoundaryCell{i, j, i, j + 1});
                }
            }
        }
    }
    return cells;
}

ContinuityProbe continuity_probe(const LtiSystem& sys, const std::vector<Eigen::VectorXd>& points,
                                 double radius, double horizon, int n_intervals) {
    if (radius < 0.0) {
        throw std::invalid_argument("continuity_probe: radius must be nonnegative");
    }
    const int n = sys.dimension();
    if (n > 2) {
        throw std::invalid_argument("continuity_probe: only 1- and 2-D systems supported");
    }

    ContinuityProbe probe;
    for (const Eigen::VectorXd& point : points) {
        ContinuityPoint entry;
        entry.point = point;
        const ValueWithDual center = value_with_dual(sys, point, horizon, n_intervals);
        if (!center.value) {
            entry.skipped = true;
            probe.points.push_back(std::move(entry));
            continue;
        }
        entry.dual_norm = center.dual_norm;

        std::vector<Eigen::VectorXd> neighbors;
        if (n == 1) {
            for (const double sign : {-1.0, 1.0}) {
                Eigen::VectorXd nb = point;
                nb[0] += sign * radius;
                neighbors.push_back(std::move(nb));
            }
        } else {
            for (int octant = 0; octant < 8; ++octant) {
                const double angle = 2.0 * M_PI * static_cast<double>(octant) / 8.0;
                Eigen::VectorXd nb = point;
                nb[0] += radius * std::cos(angle);
                nb[1] += radius * std::sin(angle);
                neighbors.push_back(std::move(nb));
            }
        }
        for (const Eigen::VectorXd& nb : neighbors) {
            const ValueWithDual v = value_with_dual(sys, nb, horizon, n_intervals);
            if (!v.value) {
                entry.skipped = true;
                break;
            }
            entry.oscillation = std::max(entry.oscillation, std::abs(*v.value - *center.value));
            entry.dual_norm = std::max(entry.dual_norm, v.dual_norm);
        }
        if (!entry.skipped) {
            probe.max_oscillation = std::max(probe.max_oscillation, entry.oscillation);
            probe.lipschitz_estimate = std::max(probe.lipschitz_estimate, entry.dual_norm);
        }
        probe.points.push_back(std::move(entry));
    }
    return probe;
}

}  // namespace handsoff
