// entangle.hpp — two-qubit concurrence, emission-conditioned states, and
// Uhlmann fidelity.
#pragma once

#include <cavqed/qops.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

namespace cavqed {

// Conditioning on an event of (numerically) zero probability.
class no_support_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- concurrence ----

// Wootters concurrence of a two-qubit density matrix: C = max(0, l1-l2-l3-l4)
// with l_i the descending square roots of the eigenvalues of rho F rho* F,
// F = sigma_y (x) sigma_y.
inline double wootters_concurrence(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw std::invalid_argument("wootters_concurrence: expected a 4x4 matrix");
    if (!is_hermitian(rho, 1e-10))
        throw std::invalid_argument("wootters_concurrence: matrix is not Hermitian");

    Matrix f = Matrix::Zero(4, 4);
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    Matrix r = rho * f * rho.conjugate() * f;

    Eigen::ComplexEigenSolver<Matrix> es(r, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("wootters_concurrence: eigensolver failed");
    std::array<double, 4> lam{};
    for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

// ---- conditioning on no emission ----

// State of the two atoms given that no quantum has been lost: project out the
// global ground component, renormalize, trace out the cavity. Returns the
// atomic state and the conditioning probability.
inline std::pair<Matrix, double> conditional_state(const DensityMatrix& rho) {
    check_atomic_layout(rho.op.layout);
    Matrix m = rho.op.entries;
    m.row(0).setZero();
    m.col(0).setZero();
    const double norm = m.trace().real();
    if (norm <= 1e-14)
        throw no_support_error("conditional_state: no excited component to condition on");
    Operator projected(rho.op.layout, m / norm);
    return {partial_trace(projected, {1, 2}).entries, norm};
}

// The same quantity straight from the collective-basis block: the population
// imbalance of the two pair states over the total excited weight.
inline double conditional_concurrence(const Eigen::Matrix4cd& rt) {
    const double den = (rt(1, 1) + rt(2, 2) + rt(3, 3)).real();
    if (den <= 1e-14)
        throw no_support_error("conditional_concurrence: excited populations vanish");
    return std::clamp(std::abs(rt(1, 1).real() - rt(2, 2).real()) / den, 0.0, 1.0);
}

// ---- fidelity ----

// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (!(a.op.layout == b.op.layout))
        throw std::invalid_argument("fidelity: layout mismatch");
    Matrix sa = sqrt_psd(a.op.entries);
    Matrix inner = hermitize(sa * b.op.entries * sa);
    const double root_sum = sqrt_psd(inner).trace().real();
    return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

} // namespace cavqed
