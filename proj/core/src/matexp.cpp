#include "handsoff/matexp.hpp"

#include <cmath>
#include <stdexcept>

namespace handsoff {
namespace {

// 1-norm threshold below which the degree-13 Pade approximant is full accuracy.
constexpr double kPadeTheta13 = 5.371920351148152;

Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
    static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
    const auto n = a.rows();
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a2 * a4;
    const Eigen::MatrixXd u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
             b[1] * ident);
    const Eigen::MatrixXd v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
        b[0] * ident;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("expm: matrix must be square");
    }
    if (!m.allFinite()) {
        throw std::invalid_argument("expm: matrix entries must be finite");
    }
    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > kPadeTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / kPadeTheta13)));
        if (squarings > kMaxSquarings) {
            throw std::runtime_error("expm: matrix norm too large, squaring budget exceeded");
        }
    }
    Eigen::MatrixXd result = pade13(m / std::ldexp(1.0, squarings));
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
    }
    return result;
}

ConstraintMatrix build_constraint_matrix(const LtiSystem& sys, double horizon, int n_intervals) {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("build_constraint_matrix: horizon must be positive");
    }
    if (n_intervals < 1) {
        throw std::invalid_argument("build_constraint_matrix: need at least one interval");
    }
    const int n = sys.dimension();
    const double dt = horizon / static_cast<double>(n_intervals);

    // exp([[-A, B],[0,0]] dt) = [[exp(-A dt), int_0^dt exp(-A t) B dt], [0, 1]]
    Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + 1, n + 1);
    augmented.topLeftCorner(n, n) = -sys.a_matrix() * dt;
    augmented.topRightCorner(n, 1) = sys.b_vector() * dt;
    const Eigen::MatrixXd block_exp = expm(augmented);
    const Eigen::MatrixXd step = block_exp.topLeftCorner(n, n);  // exp(-A dt)

    ConstraintMatrix out;
    out.horizon = horizon;
    out.n_intervals = n_intervals;
    out.g.resize(n, n_intervals);
    out.g.col(0) = block_exp.topRightCorner(n, 1);
    for (int k = 1; k < n_intervals; ++k) {
        out.g.col(k) = step * out.g.col(k - 1);
    }
    return out;
}

}  // namespace handsoff
