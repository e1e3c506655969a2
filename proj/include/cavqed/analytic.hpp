// analytic.hpp — closed-form solution in the collective representation and the
// asymptotic state it relaxes to.
#pragma once

#include <cavqed/model.hpp>

#include <cmath>
#include <stdexcept>

namespace cavqed {

// Parameter regime where a closed form does not apply (detuned drive, or the
// degenerate surface where both characteristic frequencies vanish).
class unsupported_regime : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---- characteristic constants ----

// Constants of the single-excitation block after the collective rotation:
// damping rates a_plus/a_minus, complex detuning-like delta_c, effective
// coupling eps_eff, and the two frequencies omega1 (hyperbolic) and omega2
// (oscillatory) solving w^4 + p_poly w^2 + v_poly = 0 for w^2 = -Omega^2.
struct AnalyticSolution {
    double a_plus = 0.0;
    double a_minus = 0.0;
    Complex delta_c{0.0, 0.0};
    double eps_eff = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double p_poly = 0.0;
    double v_poly = 0.0;

    double s() const { return omega1 * omega1 + omega2 * omega2; }
};

inline AnalyticSolution solve_constants(const SystemParams& p) {
    check_params(p);
    if (p.delta != 0.0)
        throw unsupported_regime("solve_constants: closed form requires resonance (delta = 0)");

    AnalyticSolution sol;
    sol.a_plus = p.kappa + 2.0 * p.gamma;
    sol.a_minus = p.kappa - 2.0 * p.gamma;
    sol.delta_c = 0.5 * Complex(p.eta, sol.a_minus);
    sol.eps_eff = std::sqrt(2.0) * p.epsilon;
    sol.p_poly = p.eta * p.eta + 4.0 * sol.eps_eff * sol.eps_eff - sol.a_minus * sol.a_minus;
    sol.v_poly = -(sol.a_minus * sol.a_minus) * (p.eta * p.eta);

    // v_poly <= 0 makes disc = sqrt(P^2 - 4V) >= |P|, so both Omega_i^2 are
    // real and nonnegative. Each root is evaluated in whichever of the two
    // algebraically equal forms avoids cancellation.
    const double disc = std::sqrt(sol.p_poly * sol.p_poly - 4.0 * sol.v_poly);
    const double scale =
        p.eta * p.eta + 4.0 * sol.eps_eff * sol.eps_eff + sol.a_minus * sol.a_minus;
    if (disc <= 1e-12 * scale)
        throw unsupported_regime("solve_constants: degenerate frequencies (P and V both vanish)");
    const double w1sq =
        sol.p_poly > 0.0 ? -2.0 * sol.v_poly / (disc + sol.p_poly) : 0.5 * (disc - sol.p_poly);
    const double w2sq =
        sol.p_poly < 0.0 ? -2.0 * sol.v_poly / (disc - sol.p_poly) : 0.5 * (disc + sol.p_poly);
    sol.omega1 = std::sqrt(std::max(w1sq, 0.0));
    sol.omega2 = std::sqrt(std::max(w2sq, 0.0));
    return sol;
}

// ---- time-dependent block ----

// Density matrix of the collective-basis block {vacuum, coupled pair,
// uncoupled pair, photon} at time t, for the initial condition with the
// excitation shared between the two pair states. Cosh/sinh terms are folded
// into the decaying exponential before evaluation so large t cannot overflow
// (omega1 < a_plus guarantees net decay).
inline Eigen::Matrix4cd rho_tilde(double t, const AnalyticSolution& sol) {
    if (t < 0.0) throw std::invalid_argument("rho_tilde: t must be nonnegative");

    const double w1 = sol.omega1, w2 = sol.omega2;
    const double s = sol.s();
    const double ea = std::exp(-sol.a_plus * t);
    const double ecosh = 0.5 * (std::exp((w1 - sol.a_plus) * t) + std::exp(-(w1 + sol.a_plus) * t));
    const double esinh = 0.5 * (std::exp((w1 - sol.a_plus) * t) - std::exp(-(w1 + sol.a_plus) * t));
    const double ecos = ea * std::cos(w2 * t);
    const double esin = ea * std::sin(w2 * t);

    const double mod2 = std::norm(sol.delta_c);
    const double eta = 2.0 * sol.delta_c.real();
    const double r22 = ((mod2 + 0.25 * s) * ecosh + (0.25 * s - mod2) * ecos +
                        0.5 * (w2 * sol.a_minus - w1 * eta) * esin +
                        0.5 * (w2 * eta + w1 * sol.a_minus) * esinh) /
                       s;
    const double r44 = sol.eps_eff * sol.eps_eff * (ecosh - ecos) / s;
    const Complex r24 = (Complex(0.0, 0.5 * sol.eps_eff) * Complex(w2, w1) *
                             Complex(esin, -esinh) +
                         sol.delta_c * sol.eps_eff * (ecosh - ecos)) /
                        s;

    Eigen::Matrix4cd rt = Eigen::Matrix4cd::Zero();
    rt(1, 1) = r22;
    rt(2, 2) = 0.5;
    rt(3, 3) = r44;
    rt(1, 3) = r24;
    rt(3, 1) = std::conj(r24);
    rt(0, 0) = 1.0 - r22 - 0.5 - r44;
    return rt;
}

// ---- representations ----

// Undo the collective rotation: embed the 4x4 block into the full space and
// conjugate with U.
inline DensityMatrix back_transform(const Eigen::Matrix4cd& rt, const Operator& u) {
    Matrix full = embed_block4(rt, u.layout);
    return make_density(Operator(u.layout, u.entries * full * u.entries.adjoint()));
}

// Stationary limit: an equal mixture of the ground state and the cavity-empty
// antisymmetric atomic pair.
inline DensityMatrix asymptotic_state(const HilbertLayout& layout) {
    check_atomic_layout(layout);
    const int d = layout.dim();
    Vector pair = (basis_ket(d, flat_index(layout, {0, 0, 1})) -
                   basis_ket(d, flat_index(layout, {0, 1, 0}))) /
                  std::sqrt(2.0);
    Matrix rho = 0.5 * (pair * pair.adjoint());
    rho(0, 0) += 0.5;
    return make_density(Operator(layout, rho));
}

} // namespace cavqed
