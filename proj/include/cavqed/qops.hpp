// qops.hpp — Dense operator kernel: tensor-factor layouts, Kronecker products,
// partial trace, Hermitian eigendecomposition, matrix exponential, vectorization.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cavqed {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Project-wide tolerances.
inline constexpr double HERM_TOL = 1e-12;   // max |M - M†| for Hermitian data
inline constexpr double POS_TOL = 1e-9;     // eigenvalue floor for density matrices
inline constexpr double TRACE_TOL = 1e-10;  // |tr rho - 1| for density matrices

// ---------------------------- Hilbert-space layout ---------------------------

// Tensor-factor dimensions, left factor outermost. Ordering is fixed
// project-wide as [cavity, atom1, atom2] for the physical space.
struct HilbertLayout {
    std::vector<int> factor_dims;

    int dim() const {
        int d = 1;
        for (int f : factor_dims) d *= f;
        return d;
    }
    bool operator==(const HilbertLayout&) const = default;
};

inline void check_layout(const HilbertLayout& l) {
    if (l.factor_dims.empty()) throw std::invalid_argument("layout: no factors");
    for (int f : l.factor_dims)
        if (f < 1) throw std::invalid_argument("layout: factor dims must be >= 1");
}

// Flat index of a product basis state, |i0> ⊗ |i1> ⊗ ... with i0 outermost.
inline int flat_index(const HilbertLayout& l, const std::vector<int>& digits) {
    if (digits.size() != l.factor_dims.size())
        throw std::invalid_argument("flat_index: digit count mismatch");
    int idx = 0;
    for (std::size_t j = 0; j < digits.size(); ++j) {
        if (digits[j] < 0 || digits[j] >= l.factor_dims[j])
            throw std::out_of_range("flat_index: digit out of range");
        idx = idx * l.factor_dims[j] + digits[j];
    }
    return idx;
}

// ---------------------------- Operators and states ---------------------------

struct Operator {
    HilbertLayout layout;
    Matrix entries;

    Operator(HilbertLayout l, Matrix m) : layout(std::move(l)), entries(std::move(m)) {
        check_layout(layout);
        if (entries.rows() != entries.cols() || entries.rows() != layout.dim())
            throw std::invalid_argument("Operator: entries do not match layout dimension");
    }
};

struct DensityMatrix {
    Operator op;
};

inline double max_abs(const Matrix& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& a, double tol = HERM_TOL) {
    return max_abs(a - a.adjoint()) <= tol;
}

inline Matrix hermitize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

// Validated density-matrix constructor: unit trace, Hermitian, eigenvalues
// above the positivity floor.
inline DensityMatrix make_density(Operator o) {
    if (!is_hermitian(o.entries)) throw std::invalid_argument("make_density: not Hermitian");
    if (std::abs(o.entries.trace().real() - 1.0) > TRACE_TOL ||
        std::abs(o.entries.trace().imag()) > TRACE_TOL)
        throw std::invalid_argument("make_density: trace not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(o.entries));
    if (es.eigenvalues().minCoeff() < -POS_TOL)
        throw std::invalid_argument("make_density: negative eigenvalue");
    return DensityMatrix{std::move(o)};
}

// --------------------------------- Tensoring ---------------------------------

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    out = Eigen::kroneckerProduct(a, b);
    return out;
}

// Kronecker product with the left factor outermost; layouts concatenate.
inline Operator tensor(const Operator& a, const Operator& b) {
    HilbertLayout l = a.layout;
    l.factor_dims.insert(l.factor_dims.end(), b.layout.factor_dims.begin(),
                         b.layout.factor_dims.end());
    return Operator(std::move(l), kron(a.entries, b.entries));
}

// Embed a single-factor operator into the full space (identities elsewhere).
inline Matrix op_on_factor(const HilbertLayout& l, std::size_t factor, const Matrix& small) {
    check_layout(l);
    if (factor >= l.factor_dims.size())
        throw std::invalid_argument("op_on_factor: factor index out of range");
    if (small.rows() != l.factor_dims[factor] || small.cols() != l.factor_dims[factor])
        throw std::invalid_argument("op_on_factor: operator does not fit factor");
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t j = 0; j < l.factor_dims.size(); ++j) {
        if (j == factor)
            out = kron(out, small);
        else
            out = kron(out, Matrix::Identity(l.factor_dims[j], l.factor_dims[j]));
    }
    return out;
}

// -------------------------------- Partial trace ------------------------------

// Trace out every factor not listed in `keep`; kept factors stay in their
// original relative order.
inline Operator partial_trace(const Operator& rho, const std::vector<int>& keep) {
    const auto& dims = rho.layout.factor_dims;
    const int nf = static_cast<int>(dims.size());
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set empty");
    std::vector<bool> kept(nf, false);
    for (int k : keep) {
        if (k < 0 || k >= nf) throw std::invalid_argument("partial_trace: invalid factor index");
        if (kept[k]) throw std::invalid_argument("partial_trace: duplicate factor index");
        kept[k] = true;
    }

    HilbertLayout out_layout;
    for (int j = 0; j < nf; ++j)
        if (kept[j]) out_layout.factor_dims.push_back(dims[j]);
    const int dout = out_layout.dim();
    const int d = rho.layout.dim();

    // Strides of each factor in the flat index (left factor outermost).
    std::vector<int> stride(nf, 1);
    for (int j = nf - 2; j >= 0; --j) stride[j] = stride[j + 1] * dims[j + 1];
    std::vector<int> out_stride;
    {
        int s = dout;
        for (int j = 0; j < nf; ++j)
            if (kept[j]) {
                s /= dims[j];
                out_stride.push_back(s);
            }
    }

    Matrix out = Matrix::Zero(dout, dout);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            bool diagonal_in_traced = true;
            int io = 0, ko = 0, kept_pos = 0;
            for (int j = 0; j < nf; ++j) {
                const int di = (i / stride[j]) % dims[j];
                const int dk = (k / stride[j]) % dims[j];
                if (kept[j]) {
                    io += di * out_stride[kept_pos];
                    ko += dk * out_stride[kept_pos];
                    ++kept_pos;
                } else if (di != dk) {
                    diagonal_in_traced = false;
                    break;
                }
            }
            if (diagonal_in_traced) out(io, ko) += rho.entries(i, k);
        }
    }
    return Operator(std::move(out_layout), std::move(out));
}

// ----------------------------- Eigendecomposition ----------------------------

// Ascending eigenvalues and the corresponding unitary of eigenvectors.
inline std::pair<Eigen::VectorXd, Matrix> herm_eigs(const Operator& a) {
    if (!is_hermitian(a.entries, 1e-10))
        throw std::invalid_argument("herm_eigs: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(a.entries));
    if (es.info() != Eigen::Success) throw std::runtime_error("herm_eigs: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// Hermitian square root with negative numerical noise clamped to zero.
inline Matrix sqrt_psd(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
    if (es.info() != Eigen::Success) throw std::runtime_error("sqrt_psd: solver failed");
    Eigen::VectorXd d = es.eigenvalues();
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = d(i) > 0.0 ? std::sqrt(d(i)) : 0.0;
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

// ----------------------------- Matrix exponential ----------------------------

// exp(t a) by scaling-and-squaring (Eigen MatrixFunctions).
inline Matrix expm(const Matrix& a, double t = 1.0) {
    Matrix scaled = t * a;
    return scaled.exp();
}

inline Operator expm(const Operator& a, double t = 1.0) {
    return Operator(a.layout, expm(a.entries, t));
}

// --------------------------- Column-stacking helpers --------------------------

// vec(A X B) = (Bᵀ ⊗ A) vec(X) with column-major stacking throughout.
inline Vector vec(const Matrix& a) {
    return Eigen::Map<const Vector>(a.data(), a.size());
}

inline Matrix unvec(const Vector& v, int n) {
    if (v.size() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("unvec: size mismatch");
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

inline Matrix super_left(const Matrix& a) {
    return kron(Matrix::Identity(a.rows(), a.rows()), a);
}

inline Matrix super_right(const Matrix& b) {
    return kron(b.transpose(), Matrix::Identity(b.rows(), b.rows()));
}

// ------------------------------- Small utilities -----------------------------

inline Vector basis_ket(int dim, int i) {
    if (i < 0 || i >= dim) throw std::out_of_range("basis_ket: index out of range");
    Vector v = Vector::Zero(dim);
    v(i) = 1.0;
    return v;
}

inline double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

} // namespace cavqed
