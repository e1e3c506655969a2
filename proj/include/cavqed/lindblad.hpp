// lindblad.hpp — Liouvillian superoperator assembly (column-stacking),
// fixed-step RK4 and matrix-exponential propagators, stationary-manifold
// extraction, and invariant-subspace confinement checks.

#pragma once

#include <cavqed/model.hpp>

#include <algorithm>
#include <map>
#include <string>

namespace cavqed {

struct integration_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------- Superoperator --------------------------------

// Acts on column-stacked density matrices: vec(AXB) = (Bᵀ ⊗ A) vec(X).
struct Superoperator {
    Matrix matrix;
    HilbertLayout layout;
};

// L vec(rho) = vec(-i[H, rho] + sum rate (2 L rho R† - R†L rho - rho R†L)).
inline Superoperator assemble_liouvillian(const Operator& h,
                                          const std::vector<LindbladTriple>& terms) {
    if (!is_hermitian(h.entries, 1e-10))
        throw std::invalid_argument("assemble_liouvillian: Hamiltonian not Hermitian");
    const int d = h.layout.dim();
    Matrix l = Complex(0, -1) * (super_left(h.entries) - super_right(h.entries));
    for (const auto& t : terms) {
        if (t.left.rows() != d || t.right.rows() != d)
            throw std::invalid_argument("assemble_liouvillian: jump dimension mismatch");
        Matrix rdl = t.right.adjoint() * t.left;
        l += t.rate * (2.0 * kron(t.right.conjugate(), t.left) - super_left(rdl) -
                       super_right(rdl));
    }
    return Superoperator{std::move(l), h.layout};
}

inline Superoperator assemble_liouvillian(const Operator& h, const DissipatorSpec& d) {
    return assemble_liouvillian(h, d.literal);
}

inline Superoperator assemble_liouvillian_collective(const Operator& h,
                                                     const DissipatorSpec& d) {
    std::vector<LindbladTriple> terms;
    for (const auto& [rate, jump] : d.collective) terms.push_back({rate, jump, jump});
    return assemble_liouvillian(h, terms);
}

// --------------------------------- Trajectory ---------------------------------

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
    std::map<std::string, std::vector<double>> observables;
    double max_trace_drift = 0.0;
    int renormalizations = 0;
};

// ------------------------------ Time propagation ------------------------------

// Classic fixed-step 4th-order integration of d vec(rho)/dt = L vec(rho),
// sampling the state at each grid time. Trace drift beyond 1e-12 is
// renormalized away (and counted); drift beyond 1e-6 aborts.
inline Trajectory evolve_rk(const Superoperator& l, const DensityMatrix& rho0,
                            const std::vector<double>& t_grid, double h_max = 1e-3) {
    const int d = l.layout.dim();
    if (rho0.op.layout != l.layout)
        throw std::invalid_argument("evolve_rk: state/superoperator layout mismatch");
    if (t_grid.empty() || t_grid.front() != 0.0)
        throw std::invalid_argument("evolve_rk: time grid must start at 0");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1])
            throw std::invalid_argument("evolve_rk: time grid must be ascending");
    if (!(h_max > 0.0)) throw std::invalid_argument("evolve_rk: step must be > 0");

    Trajectory traj;
    Vector v = vec(rho0.op.entries);
    auto trace_of = [d](const Vector& w) {
        Complex tr = 0.0;
        for (int i = 0; i < d; ++i) tr += w(i * (d + 1));
        return tr;
    };
    auto store = [&](double t) {
        const Complex tr = trace_of(v);
        const double drift = std::abs(tr - 1.0);
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        if (drift > 1e-6)
            throw integration_error("evolve_rk: trace drift " + std::to_string(drift) +
                                    " exceeds 1e-6; reduce the integration step");
        if (drift > 1e-12) {
            v /= tr;
            ++traj.renormalizations;
        }
        traj.times.push_back(t);
        traj.states.push_back(DensityMatrix{Operator(l.layout, unvec(v, d))});
    };

    store(t_grid.front());
    Vector k1(v.size()), k2(v.size()), k3(v.size()), k4(v.size());
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        const double span = t_grid[i] - t_grid[i - 1];
        const int n = std::max(1, static_cast<int>(std::ceil(span / h_max - 1e-9)));
        const double h = span / n;
        for (int s = 0; s < n; ++s) {
            k1.noalias() = l.matrix * v;
            k2.noalias() = l.matrix * (v + (h / 2.0) * k1);
            k3.noalias() = l.matrix * (v + (h / 2.0) * k2);
            k4.noalias() = l.matrix * (v + h * k3);
            v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        store(t_grid[i]);
    }
    return traj;
}

// Exact propagator vec(rho(t)) = exp(L t) vec(rho0); the oracle for evolve_rk.
inline DensityMatrix evolve_expm(const Superoperator& l, const DensityMatrix& rho0,
                                 double t) {
    if (rho0.op.layout != l.layout)
        throw std::invalid_argument("evolve_expm: state/superoperator layout mismatch");
    if (t < 0.0) throw std::invalid_argument("evolve_expm: t must be >= 0");
    Vector v = expm(l.matrix, t) * vec(rho0.op.entries);
    return DensityMatrix{Operator(l.layout, unvec(v, l.layout.dim()))};
}

// ----------------------------- Stationary manifold -----------------------------

struct StationaryManifold {
    int dimension = 0;                         // null-space dimension of L
    std::vector<DensityMatrix> representatives; // unit-trace stationary states
};

// Null space of L via SVD (threshold on singular values), recombined into
// Hermitian unit-trace representatives. The manifold can be degenerate, so a
// basis is returned, never a single state.
inline StationaryManifold steady_states(const Superoperator& l, double tol = 1e-10) {
    const int d = l.layout.dim();
    Eigen::JacobiSVD<Matrix> svd(l.matrix, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    StationaryManifold out;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol) ++out.dimension;
    if (out.dimension == 0)
        throw std::runtime_error("steady_states: empty null space; a trace-preserving "
                                 "generator must have rank deficiency >= 1");

    // Hermitian basis of the null space (closed under conjugation because
    // L(rho†) = (L rho)† for any Lindblad generator).
    std::vector<Matrix> basis;
    auto add_to_basis = [&](Matrix cand) {
        for (const Matrix& b : basis) cand -= (b * cand).trace().real() * b;
        const double norm = std::sqrt(std::abs((cand.adjoint() * cand).trace().real()));
        if (norm > 1e-8 && basis.size() < static_cast<std::size_t>(out.dimension))
            basis.push_back(cand / norm);
    };
    for (Eigen::Index j = sv.size() - out.dimension; j < sv.size(); ++j) {
        Matrix m = unvec(svd.matrixV().col(j), d);
        add_to_basis(0.5 * (m + m.adjoint()));
        add_to_basis(Complex(0, -0.5) * (m - m.adjoint()));
    }

    const double residual_tol = std::max(10.0 * tol, 1e-9);
    auto push_unique = [&](const Matrix& rho) {
        if (max_abs(l.matrix * vec(rho)) > residual_tol) return;
        for (const auto& r : out.representatives)
            if (max_abs(r.op.entries - rho) < 1e-8) return;
        out.representatives.push_back(DensityMatrix{Operator(l.layout, rho)});
    };
    for (const Matrix& b : basis) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(b);
        // Basis elements that are already (almost) positive: normalize directly.
        if (es.eigenvalues().minCoeff() >= -1e-10 && es.eigenvalues().maxCoeff() > 1e-8)
            push_unique(b / b.trace().real());
        // Stationary pure states hiding inside the basis element.
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (std::abs(es.eigenvalues()(i)) < 1e-6) continue;
            Vector vvec = es.eigenvectors().col(i);
            push_unique(vvec * vvec.adjoint());
        }
    }
    return out;
}

// ----------------------------- Confinement check ------------------------------

// Max population outside the span of the four invariant basis states over the
// whole trajectory; one-excitation initial data must stay confined for any
// Fock cutoff.
inline double confinement_check(const Trajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("confinement_check: empty trajectory");
    double worst = 0.0;
    const auto b = basis4(traj.states.front().op.layout);
    for (const auto& st : traj.states) {
        double inside = 0.0;
        for (int i : b) inside += st.op.entries(i, i).real();
        worst = std::max(worst, 1.0 - inside);
    }
    return worst;
}

} // namespace cavqed
