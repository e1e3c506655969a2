#include <catch2/catch_amalgamated.hpp>

#include <cavqed/model.hpp>

#include <cmath>

using namespace cavqed;

namespace {

const HilbertLayout L8{{2, 2, 2}};

SystemParams fig1_params() {
    SystemParams p;
    p.eta = 0.5;
    p.kappa = 0.1;
    p.gamma = 0.01;
    return p;
}

// Apply the literal triple convention rate (2 L rho R† - R†L rho - rho R†L).
Matrix apply_triples(const std::vector<LindbladTriple>& terms, const Matrix& rho) {
    Matrix out = Matrix::Zero(rho.rows(), rho.cols());
    for (const auto& t : terms) {
        Matrix rdl = t.right.adjoint() * t.left;
        out += t.rate * (2.0 * t.left * rho * t.right.adjoint() - rdl * rho - rho * rdl);
    }
    return out;
}

} // namespace

TEST_CASE("parameter validation", "[model]") {
    SystemParams p = fig1_params();
    REQUIRE_NOTHROW(check_params(p));
    p.f = 1.2;
    REQUIRE_THROWS_AS(check_params(p), std::invalid_argument);
    p = fig1_params();
    p.epsilon = 0.0;
    REQUIRE_THROWS_AS(check_params(p), std::invalid_argument);
    p = fig1_params();
    p.frame = Frame::lab; // lab frame needs omega0
    REQUIRE_THROWS_AS(check_params(p), std::invalid_argument);
    p.omega0 = 20.0;
    REQUIRE_NOTHROW(check_params(p));
}

TEST_CASE("dipole-dipole Hamiltonian", "[model]") {
    SystemParams p = fig1_params();
    Operator h12 = build_h12(p, L8);
    // |0,+,-> = 2 and |0,-,+> = 1
    REQUIRE(std::abs(h12.entries(2, 1) - 0.5) == 0.0);
    REQUIRE(is_hermitian(h12.entries));
    REQUIRE((h12.entries * basis_ket(8, 0)).norm() == 0.0); // kills |-,->
    REQUIRE((h12.entries * basis_ket(8, 3)).norm() == 0.0); // kills |+,+>
    p.eta = 0.0;
    REQUIRE(max_abs(build_h12(p, L8).entries) == 0.0);
}

TEST_CASE("geometry helpers", "[model]") {
    SECTION("eta from geometry") {
        Geometry g{1.0, M_PI / 2.0, 1.0, 1.0, 1.0}; // omega0 R / c = 1
        REQUIRE(std::abs(eta_from_geometry(g) - 0.75) <= 1e-15);
        g.theta = 0.0;
        REQUIRE(std::abs(eta_from_geometry(g) + 1.5) <= 1e-15);
        g.R = 0.0;
        REQUIRE_THROWS_AS(eta_from_geometry(g), std::invalid_argument);
    }
    SECTION("eta changes sign at cos^2 theta = 1/3") {
        const double th0 = std::acos(std::sqrt(1.0 / 3.0));
        Geometry g{1.0, th0, 1.0, 1.0, 1.0};
        REQUIRE(std::abs(eta_from_geometry(g)) <= 1e-15);
        g.theta = th0 - 1e-3;
        const double below = eta_from_geometry(g);
        g.theta = th0 + 1e-3;
        const double above = eta_from_geometry(g);
        REQUIRE(below < 0.0);
        REQUIRE(above > 0.0);
    }
    SECTION("cooperation factor limits") {
        REQUIRE(dipole_f(0.0, 0.7) == 1.0);
        REQUIRE(std::abs(dipole_f(1e-6, 0.7) - 1.0) <= 1e-9);
        REQUIRE(std::abs(dipole_f(1.0, M_PI / 2.0) - 1.5 * std::cos(1.0)) <= 1e-14);
        REQUIRE(std::abs(dipole_f(1000.0, M_PI / 4.0)) <= 2e-3);
        Geometry g{0.0, 0.3, 1.0, 1.0, 1.0};
        REQUIRE(dipole_f(g) == 1.0);
    }
    SECTION("series matches the direct form around the switch point") {
        double worst = 0.0;
        for (int ix = 0; ix <= 60; ++ix) {
            const double x = DIPOLE_SERIES_X0 * (0.5 + 1.5 * ix / 60.0);
            for (int it = 0; it <= 12; ++it) {
                const double th = M_PI * it / 12.0;
                const double s = 1.0 - (2.0 - std::pow(std::cos(th), 2)) * x * x / 10.0 +
                                 (3.0 - 2.0 * std::pow(std::cos(th), 2)) * std::pow(x, 4) / 280.0;
                worst = std::max(worst, std::abs(s - dipole_f_direct(x, th)));
            }
        }
        REQUIRE(worst <= 1e-9);
    }
}

TEST_CASE("atom-cavity Hamiltonian", "[model]") {
    SystemParams p = fig1_params();
    Operator n_op = excitation_number(L8);

    SECTION("coupling matrix element in both frames") {
        Operator h_rot = build_hac(p, L8);
        REQUIRE(std::abs(h_rot.entries(4, 2) - p.epsilon) == 0.0); // <1,-,-|H|0,+,->
        SystemParams pl = p;
        pl.frame = Frame::lab;
        pl.omega0 = 5.0;
        Operator h_lab = build_hac(pl, L8);
        REQUIRE(std::abs(h_lab.entries(4, 2) - p.epsilon) == 0.0);
        REQUIRE(std::abs(h_lab.entries(0, 0) - (-5.0)) == 0.0); // vacuum free energy
    }
    SECTION("commutes with the excitation number exactly") {
        REQUIRE(max_abs(build_hac(p, L8).entries * n_op.entries -
                        n_op.entries * build_hac(p, L8).entries) == 0.0);
        SystemParams pl = p;
        pl.frame = Frame::lab;
        pl.omega0 = 7.0;
        pl.delta = 0.3;
        REQUIRE(max_abs(build_hac(pl, L8).entries * n_op.entries -
                        n_op.entries * build_hac(pl, L8).entries) == 0.0);
    }
    SECTION("resonant exchange-free block is pure coupling") {
        SystemParams p0 = fig1_params();
        p0.eta = 0.0;
        Eigen::Matrix4cd blk = project_block4(build_hac(p0, L8).entries, L8);
        REQUIRE(std::abs(blk(3, 1) - p0.epsilon) == 0.0);
        REQUIRE(std::abs(blk(3, 2) - p0.epsilon) == 0.0);
        REQUIRE(blk.diagonal().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("excitation number operator", "[model]") {
    Operator n_op = excitation_number(L8);
    REQUIRE(std::abs(n_op.entries(0, 0)) == 0.0);           // |0,-,->
    REQUIRE(std::abs(n_op.entries(2, 2) - 1.0) == 0.0);     // |0,+,->
    HilbertLayout l12{{3, 2, 2}};
    Operator n12 = excitation_number(l12);
    const int idx = flat_index(l12, {1, 1, 1});
    REQUIRE(std::abs(n12.entries(idx, idx) - 3.0) == 0.0);  // |1,+,+>
}

TEST_CASE("dissipator encodings", "[model]") {
    SECTION("fully cooperative bath leaves a single bright channel") {
        SystemParams p = fig1_params();
        DissipatorSpec d = build_dissipators(p, L8);
        REQUIRE(d.collective[1].first == 2.0 * p.gamma);
        REQUIRE(d.collective[2].first == 0.0);
    }
    SECTION("cavity-only decay empties one photon at rate 2k") {
        SystemParams p = fig1_params();
        p.gamma = 0.0;
        DissipatorSpec d = build_dissipators(p, L8);
        Matrix rho = Matrix::Zero(8, 8);
        rho(4, 4) = 1.0; // |1,-,->
        Matrix drho = apply_triples(d.literal, rho);
        REQUIRE(std::abs(drho(0, 0) - 2.0 * p.kappa) <= 1e-15);
    }
    SECTION("literal and collective encodings act identically") {
        SystemParams p = fig1_params();
        p.gamma = 0.01;
        p.f = 0.37;
        DissipatorSpec d = build_dissipators(p, L8);
        std::vector<LindbladTriple> coll;
        for (const auto& [rate, jump] : d.collective) coll.push_back({rate, jump, jump});
        Matrix rho = Matrix::Zero(8, 8);
        rho(2, 2) = 0.4;
        rho(1, 1) = 0.3;
        rho(4, 4) = 0.3;
        rho(2, 1) = Complex(0.1, 0.05);
        rho(1, 2) = std::conj(rho(2, 1));
        REQUIRE(max_abs(apply_triples(d.literal, rho) - apply_triples(coll, rho)) <= 1e-12);
    }
    SECTION("cooperation factor outside [-1,1] is rejected") {
        SystemParams p = fig1_params();
        p.f = -1.0001;
        REQUIRE_THROWS_AS(build_dissipators(p, L8), std::invalid_argument);
    }
}

TEST_CASE("collective unitary", "[model]") {
    Operator u = collective_unitary(L8);
    SECTION("unitary, commutes with the excitation number") {
        REQUIRE(max_abs(u.entries * u.entries.adjoint() - Matrix::Identity(8, 8)) <= 1e-12);
        Matrix n = excitation_number(L8).entries;
        REQUIRE(max_abs(u.entries * n - n * u.entries) <= 1e-13);
    }
    SECTION("fixed points and rotated pair") {
        REQUIRE((u.entries * basis_ket(8, 0) - basis_ket(8, 0)).norm() <= 1e-14);
        REQUIRE((u.entries * basis_ket(8, 3) - basis_ket(8, 3)).norm() <= 1e-14);
        Vector sym = (basis_ket(8, 2) + basis_ket(8, 1)) / std::sqrt(2.0);
        REQUIRE((u.entries * basis_ket(8, 2) - sym).norm() <= 1e-14);
        Vector anti = (basis_ket(8, 1) - basis_ket(8, 2)) / std::sqrt(2.0);
        REQUIRE((u.entries * basis_ket(8, 1) - anti).norm() <= 1e-14);
    }
    SECTION("conjugation reduces the Hamiltonian to one coupled mode") {
        SystemParams p = fig1_params();
        Matrix ht = u.entries.adjoint() * build_hac(p, L8).entries * u.entries;
        Eigen::Matrix4cd blk = project_block4(ht, L8);
        Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
        expect(1, 1) = p.eta;
        expect(2, 2) = -p.eta;
        expect(1, 3) = std::sqrt(2.0) * p.epsilon;
        expect(3, 1) = std::sqrt(2.0) * p.epsilon;
        REQUIRE(max_abs(Matrix(blk - expect)) <= 1e-12);
    }
}

TEST_CASE("initial state", "[model]") {
    DensityMatrix rho0 = initial_state(L8);
    REQUIRE(std::abs(rho0.op.entries.trace().real() - 1.0) == 0.0);
    Matrix n = excitation_number(L8).entries;
    REQUIRE(std::abs((n * rho0.op.entries).trace().real() - 1.0) == 0.0);

    Operator u = collective_unitary(L8);
    Matrix rt = u.entries.adjoint() * rho0.op.entries * u.entries;
    Eigen::Matrix4cd blk = project_block4(rt, L8);
    Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
    expect(1, 1) = 0.5;
    expect(2, 2) = 0.5;
    REQUIRE(max_abs(Matrix(blk - expect)) <= 1e-14);
}

TEST_CASE("invariant basis block", "[model]") {
    REQUIRE(basis4(L8) == std::array<int, 4>{0, 2, 1, 4});
    HilbertLayout l12{{3, 2, 2}};
    REQUIRE(basis4(l12) == std::array<int, 4>{0, 2, 1, 4}); // cutoff independent
    Eigen::Matrix4cd blk;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) blk(i, j) = Complex(i + 1, j - i);
    REQUIRE(max_abs(Matrix(project_block4(embed_block4(blk, L8), L8) - blk)) == 0.0);
}
