#include "handsoff/di_oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace handsoff {
namespace {

ControlSignal sample_pulse(const RectPulse& pulse, double horizon, int n_intervals) {
    if (n_intervals < 1) {
        throw std::invalid_argument("sample_pulse: need at least one interval");
    }
    const double dt = horizon / static_cast<double>(n_intervals);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(n_intervals);
    for (int k = 0; k < n_intervals; ++k) {
        const double mid = dt * (static_cast<double>(k) + 0.5);
        if (mid >= pulse.start && mid < pulse.end) values[k] = pulse.height;
    }
    return ControlSignal(horizon, std::move(values));
}

}  // namespace

LtiSystem double_integrator() {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 1.0, 0.0, 0.0;
    Eigen::VectorXd b(2);
    b << 0.0, 1.0;
    return LtiSystem(std::move(a), std::move(b), "double-integrator");
}

bool in_nonnormal_region(const DiInstance& inst) {
    if (!(inst.horizon > 0.0)) {
        throw std::invalid_argument("in_nonnormal_region: horizon must be positive");
    }
    return 0.5 * inst.xi2 * inst.xi2 < inst.xi1 && inst.xi2 < 0.0 &&
           -inst.xi2 / 2.0 - inst.xi1 / inst.xi2 < inst.horizon;
}

SwitchTimes analytic_handsoff(const DiInstance& inst) {
    if (!in_nonnormal_region(inst)) {
        throw std::invalid_argument("analytic_handsoff: instance outside the non-normal region");
    }
    return SwitchTimes{inst.xi2 / 2.0 - inst.xi1 / inst.xi2,
                       -inst.xi2 / 2.0 - inst.xi1 / inst.xi2};
}

RectPulse analytic_handsoff_pulse(const DiInstance& inst) {
    const SwitchTimes times = analytic_handsoff(inst);
    return RectPulse{times.t1, times.t2, 1.0};
}

ControlSignal analytic_handsoff_signal(const DiInstance& inst, int n_intervals) {
    return sample_pulse(analytic_handsoff_pulse(inst), inst.horizon, n_intervals);
}

std::pair<double, double> moment_constraints(const DiInstance& inst) {
    return {-inst.xi2, -inst.xi1 - inst.xi2 * inst.horizon};
}

RectPulse non_sparse_l1_pulse(const DiInstance& inst) {
    if (!in_nonnormal_region(inst)) {
        throw std::invalid_argument("non_sparse_l1_pulse: instance outside the non-normal region");
    }
    const auto [m0, m1] = moment_constraints(inst);
    const double centroid = inst.horizon - m1 / m0;
    // Widest symmetric pulse about the centroid, capped at twice the
    // hands-off support so the height is at least 1/2.
    double width = 2.0 * m0;
    if (centroid < m0 || centroid + m0 > inst.horizon) {
        width = 2.0 * std::min(centroid, inst.horizon - centroid);
    }
    if (!(width > m0)) {
        throw std::invalid_argument(
            "non_sparse_l1_pulse: no widened pulse fits the horizon for this instance");
    }
    return RectPulse{centroid - width / 2.0, centroid + width / 2.0, m0 / width};
}

ControlSignal non_sparse_l1_control(const DiInstance& inst, int n_intervals) {
    return sample_pulse(non_sparse_l1_pulse(inst), inst.horizon, n_intervals);
}

Eigen::Vector2d terminal_state_under_pulse(const DiInstance& inst, const RectPulse& pulse) {
    const double T = inst.horizon;
    const double a = pulse.start;
    const double b = pulse.end;
    const double h = pulse.height;
    Eigen::Vector2d terminal;
    terminal[1] = inst.xi2 + h * (b - a);
    terminal[0] = inst.xi1 + inst.xi2 * T + h * ((T - a) * (T - a) - (T - b) * (T - b)) / 2.0;
    return terminal;
}

}  // namespace handsoff
