// model.hpp — Physical model: parameters, dipole and atom-cavity Hamiltonians,
// dissipator specifications, geometry helpers, collective unitary, initial state.

#pragma once

#include <cavqed/qops.hpp>

#include <array>
#include <cmath>
#include <optional>

namespace cavqed {

// ------------------------------- Parameters ----------------------------------

enum class Frame { rotating, lab };

// All rates in units of the atom-cavity coupling epsilon.
struct SystemParams {
    double epsilon = 1.0; // atom-cavity coupling (rate unit)
    double eta = 0.0;     // dipole-dipole strength
    double kappa = 0.0;   // cavity decay
    double gamma = 0.0;   // single-atom decay
    double f = 1.0;       // bath cooperation factor, cross damping = gamma * f
    double delta = 0.0;   // cavity detuning omega - omega0
    std::optional<double> omega0{}; // absolute transition frequency, lab frame only
    int fock_cutoff = 1;  // max photon number
    Frame frame = Frame::rotating;
};

inline void check_params(const SystemParams& p) {
    if (!(p.epsilon > 0.0)) throw std::invalid_argument("params: epsilon must be > 0");
    if (p.kappa < 0.0) throw std::invalid_argument("params: kappa must be >= 0");
    if (p.gamma < 0.0) throw std::invalid_argument("params: gamma must be >= 0");
    if (p.fock_cutoff < 1) throw std::invalid_argument("params: fock_cutoff must be >= 1");
    if (std::abs(p.f) > 1.0) throw std::invalid_argument("params: |f| must be <= 1");
    if (p.frame == Frame::lab && (!p.omega0 || *p.omega0 <= 0.0))
        throw std::invalid_argument("params: lab frame requires omega0 > 0");
}

inline HilbertLayout layout_for(const SystemParams& p) {
    return HilbertLayout{{p.fock_cutoff + 1, 2, 2}};
}

// ------------------------- Elementary factor operators -----------------------
// Atom basis convention: index 0 = ground |->, index 1 = excited |+>, so
// sigma_z = diag(-1, +1) and sigma_+ = |+><-| has its entry at (1, 0).

inline Matrix atom_sigma_plus() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;
    return m;
}

inline Matrix atom_sigma_minus() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

inline Matrix atom_sigma_z() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}

inline Matrix cavity_annihilator(int nc) {
    Matrix m = Matrix::Zero(nc, nc);
    for (int n = 1; n < nc; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

inline void check_atomic_layout(const HilbertLayout& l) {
    check_layout(l);
    if (l.factor_dims.size() != 3 || l.factor_dims[1] != 2 || l.factor_dims[2] != 2 ||
        l.factor_dims[0] < 2)
        throw std::invalid_argument("layout: expected [cavity >= 2, atom1 = 2, atom2 = 2]");
}

// Embedded single-site operators on the full [cavity, atom1, atom2] space.
inline Matrix annihilator(const HilbertLayout& l) {
    check_atomic_layout(l);
    return op_on_factor(l, 0, cavity_annihilator(l.factor_dims[0]));
}

inline Matrix sigma_plus(const HilbertLayout& l, int atom) {
    check_atomic_layout(l);
    if (atom != 1 && atom != 2) throw std::invalid_argument("sigma_plus: atom must be 1 or 2");
    return op_on_factor(l, atom, atom_sigma_plus());
}

inline Matrix sigma_minus(const HilbertLayout& l, int atom) {
    check_atomic_layout(l);
    if (atom != 1 && atom != 2) throw std::invalid_argument("sigma_minus: atom must be 1 or 2");
    return op_on_factor(l, atom, atom_sigma_minus());
}

inline Matrix sigma_z(const HilbertLayout& l, int atom) {
    check_atomic_layout(l);
    if (atom != 1 && atom != 2) throw std::invalid_argument("sigma_z: atom must be 1 or 2");
    return op_on_factor(l, atom, atom_sigma_z());
}

// ------------------------------- Hamiltonians ---------------------------------

// Dipole-dipole exchange eta (s+_1 s-_2 + h.c.).
inline Operator build_h12(const SystemParams& p, const HilbertLayout& l) {
    Matrix h = p.eta * (sigma_plus(l, 1) * sigma_minus(l, 2) +
                        sigma_plus(l, 2) * sigma_minus(l, 1));
    return Operator(l, std::move(h));
}

// Full atom-cavity Hamiltonian. Lab frame keeps the free parts at omega
// = omega0 + delta; the rotating frame (exact at the shared frequency
// omega0) retains only the detuning, couplings, and exchange terms.
inline Operator build_hac(const SystemParams& p, const HilbertLayout& l) {
    check_params(p);
    Matrix a = annihilator(l);
    Matrix ad = a.adjoint();
    Matrix coupling =
        p.epsilon * (a * sigma_plus(l, 1) + ad * sigma_minus(l, 1) +
                     a * sigma_plus(l, 2) + ad * sigma_minus(l, 2));
    Matrix h = coupling + build_h12(p, l).entries;
    if (p.frame == Frame::lab) {
        const double w0 = *p.omega0;
        h += (w0 + p.delta) * (ad * a) + 0.5 * w0 * (sigma_z(l, 1) + sigma_z(l, 2));
    } else {
        h += p.delta * (ad * a);
    }
    return Operator(l, std::move(h));
}

// Total excitation number a†a + (sz1 + sz2)/2 + 1; eigenvalue 0 only on the
// global vacuum. Commutes with build_hac exactly (entrywise zero).
inline Operator excitation_number(const HilbertLayout& l) {
    check_atomic_layout(l);
    Matrix a = annihilator(l);
    Matrix n = a.adjoint() * a + 0.5 * (sigma_z(l, 1) + sigma_z(l, 2)) +
               Matrix::Identity(l.dim(), l.dim());
    return Operator(l, std::move(n));
}

// ------------------------------- Dissipators ----------------------------------

// One term rate (2 L rho R† - R†L rho - rho R†L).
struct LindbladTriple {
    double rate;
    Matrix left;
    Matrix right;
};

// Two equivalent encodings of the loss channels: the literal per-atom form
// with cross damping gamma*f, and the collective form with rates
// gamma(1 ± f) on (s-_1 ± s-_2)/sqrt(2).
struct DissipatorSpec {
    std::vector<LindbladTriple> literal;
    std::vector<std::pair<double, Matrix>> collective;
};

inline DissipatorSpec build_dissipators(const SystemParams& p, const HilbertLayout& l) {
    check_params(p);
    Matrix a = annihilator(l);
    Matrix sm1 = sigma_minus(l, 1);
    Matrix sm2 = sigma_minus(l, 2);
    DissipatorSpec d;
    d.literal.push_back({p.kappa, a, a});
    d.literal.push_back({p.gamma, sm1, sm1});
    d.literal.push_back({p.gamma, sm2, sm2});
    d.literal.push_back({p.gamma * p.f, sm1, sm2});
    d.literal.push_back({p.gamma * p.f, sm2, sm1});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    d.collective.emplace_back(p.kappa, a);
    d.collective.emplace_back(p.gamma * (1.0 + p.f), inv_sqrt2 * (sm1 + sm2));
    d.collective.emplace_back(p.gamma * (1.0 - p.f), inv_sqrt2 * (sm1 - sm2));
    return d;
}

// ----------------------------- Collective unitary -----------------------------

// U = exp[-(pi/4)(s+_1 s-_2 - s-_1 s+_2)]; rotates the atoms into
// symmetric/antisymmetric combinations and commutes with the excitation number.
inline Operator collective_unitary(const HilbertLayout& l) {
    check_atomic_layout(l);
    Matrix g = sigma_plus(l, 1) * sigma_minus(l, 2) - sigma_minus(l, 1) * sigma_plus(l, 2);
    return Operator(l, expm(g, -M_PI / 4.0));
}

// ------------------------------- Initial state --------------------------------

// One excitation in the atoms with equal probability on either one, cavity in
// vacuum: rho(0) = |0><0| ⊗ (|+-><+-| + |-+><-+|)/2.
inline DensityMatrix initial_state(const HilbertLayout& l) {
    check_atomic_layout(l);
    Matrix rho = Matrix::Zero(l.dim(), l.dim());
    const int up1 = flat_index(l, {0, 1, 0});
    const int up2 = flat_index(l, {0, 0, 1});
    rho(up1, up1) = 0.5;
    rho(up2, up2) = 0.5;
    return make_density(Operator(l, std::move(rho)));
}

// ------------------------- One-excitation basis block -------------------------

// Flat indices of the ordered invariant basis
// {|0,-,->, |0,+,->, |0,-,+>, |1,-,->}; the dynamics of initial_state stays in
// its span for any Fock cutoff.
inline std::array<int, 4> basis4(const HilbertLayout& l) {
    check_atomic_layout(l);
    return {flat_index(l, {0, 0, 0}), flat_index(l, {0, 1, 0}),
            flat_index(l, {0, 0, 1}), flat_index(l, {1, 0, 0})};
}

inline Eigen::Matrix4cd project_block4(const Matrix& full, const HilbertLayout& l) {
    auto b = basis4(l);
    if (full.rows() != l.dim() || full.cols() != l.dim())
        throw std::invalid_argument("project_block4: dimension mismatch");
    Eigen::Matrix4cd out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(i, j) = full(b[i], b[j]);
    return out;
}

inline Matrix embed_block4(const Eigen::Matrix4cd& block, const HilbertLayout& l) {
    auto b = basis4(l);
    Matrix out = Matrix::Zero(l.dim(), l.dim());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out(b[i], b[j]) = block(i, j);
    return out;
}

// --------------------------------- Geometry -----------------------------------

struct Geometry {
    double R;      // interatomic separation
    double theta;  // angle between R and the transition dipole
    double omega0; // transition frequency
    double c;      // speed of light
    double Gamma0; // free-space spontaneous emission rate
};

inline void check_geometry(const Geometry& g) {
    if (!(g.R > 0.0)) throw std::invalid_argument("geometry: R must be > 0");
    if (g.theta < 0.0 || g.theta > M_PI)
        throw std::invalid_argument("geometry: theta must be in [0, pi]");
    if (!(g.omega0 > 0.0)) throw std::invalid_argument("geometry: omega0 must be > 0");
    if (!(g.c > 0.0)) throw std::invalid_argument("geometry: c must be > 0");
}

// eta = (3/4) Gamma0 c^3 / (omega0^3 R^3) (1 - 3 cos^2 theta); changes sign
// exactly at cos^2 theta = 1/3.
inline double eta_from_geometry(const Geometry& g) {
    check_geometry(g);
    const double x = g.omega0 * g.R / g.c;
    const double ct = std::cos(g.theta);
    return 0.75 * g.Gamma0 / (x * x * x) * (1.0 - 3.0 * ct * ct);
}

// Below this value of x = omega0 R / c the 1/x^3 cancellation in f costs more
// than the x^4 series truncation.
inline constexpr double DIPOLE_SERIES_X0 = 1e-2;

// Bath cooperation factor f(R) with x = omega0 R / c:
// f = (3/2){(1 - cos^2 th) sin x / x + (1 - 3 cos^2 th)(cos x / x^2 - sin x / x^3)}.
// x -> 0 limit is 1; small x uses the Taylor series through x^4.
inline double dipole_f(double x, double theta) {
    if (x < 0.0) throw std::invalid_argument("dipole_f: x must be >= 0");
    const double s = std::cos(theta) * std::cos(theta);
    if (x == 0.0) return 1.0;
    if (x < DIPOLE_SERIES_X0)
        return 1.0 - (2.0 - s) * x * x / 10.0 + (3.0 - 2.0 * s) * x * x * x * x / 280.0;
    return 1.5 * ((1.0 - s) * std::sin(x) / x +
                  (1.0 - 3.0 * s) * (std::cos(x) / (x * x) - std::sin(x) / (x * x * x)));
}

// Direct evaluation regardless of x; only for validating the series branch.
inline double dipole_f_direct(double x, double theta) {
    const double s = std::cos(theta) * std::cos(theta);
    return 1.5 * ((1.0 - s) * std::sin(x) / x +
                  (1.0 - 3.0 * s) * (std::cos(x) / (x * x) - std::sin(x) / (x * x * x)));
}

inline double dipole_f(const Geometry& g) {
    if (g.R == 0.0) return 1.0; // documented point-like limit
    check_geometry(g);
    return dipole_f(g.omega0 * g.R / g.c, g.theta);
}

} // namespace cavqed
