#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dense_ref.hpp"
#include "efl/gaussian.hpp"
#include "efl/rng.hpp"

using namespace efl;
using linalg::Matrix;
namespace dr = dense_ref;

namespace {

// random circuit over the matchgate generator set on adjacent pairs
std::vector<PrimGate> random_matchgate_circuit(int n_qubits, int n_gates, RngStream& rng,
                                               std::vector<double>& params) {
    std::vector<PrimGate> circ;
    params.clear();
    for (int i = 0; i < n_gates; ++i) {
        const int pick = static_cast<int>(rng.uniform(0, 5));
        const double angle = rng.uniform(-2.5, 2.5);
        const int slot = static_cast<int>(params.size());
        params.push_back(angle);
        if (pick == 0) {
            const int q = static_cast<int>(rng.uniform(0, n_qubits));
            circ.push_back({PrimKind::RZ, q, -1, slot, 1.0, 0.0});
        } else {
            const int q = static_cast<int>(rng.uniform(0, n_qubits - 1));
            const PrimKind kind = pick == 1 ? PrimKind::XX
                                : pick == 2 ? PrimKind::YY
                                : pick == 3 ? PrimKind::XY
                                            : PrimKind::YX;
            circ.push_back({kind, q, q + 1, slot, 1.0, 0.0});
        }
    }
    return circ;
}

}  // namespace

TEST_CASE("covariance of the fully occupied reference") {
    auto g = covariance_from_state(new_zero_state(3));
    g.validate();
    for (int p = 0; p < 3; ++p) {
        CHECK(g.gamma(2 * p, 2 * p + 1) == doctest::Approx(-1.0));
        CHECK(g.gamma(2 * p + 1, 2 * p) == doctest::Approx(1.0));
    }
    // diagonal exactly zero, everything else zero for a product state
    for (int i = 0; i < 6; ++i) CHECK(g.gamma(i, i) == 0.0);
    // <-i g^A g^B> = <Z> = +1 per occupied mode
    CHECK(-g.gamma(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("covariance of a Bell pair has vanishing single-mode blocks") {
    StateVector bell(2);
    bell.amp(0) = 1.0 / std::sqrt(2.0);
    bell.amp(3) = 1.0 / std::sqrt(2.0);
    auto g = covariance_from_state(bell);
    // each qubit's marginal is maximally mixed: its 2x2 block vanishes
    CHECK(std::abs(g.gamma(0, 1)) < 1e-14);
    CHECK(std::abs(g.gamma(2, 3)) < 1e-14);
}

TEST_CASE("covariance against the dense two-point oracle") {
    RngStream rng(7);
    StateVector s(3);
    double nrm = 0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
        s.amp(i) = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        nrm += std::norm(s.amp(i));
    }
    for (std::size_t i = 0; i < s.dim(); ++i) s.amp(i) /= std::sqrt(nrm);
    auto g = covariance_from_state(s);
    std::vector<cplx> v(s.amplitudes().begin(), s.amplitudes().end());
    for (int k = 0; k < 6; ++k)
        for (int l = 0; l < 6; ++l) {
            if (k == l) continue;
            auto gk = dr::pauli_sum_matrix(jw_majorana(k, 3));
            auto gl = dr::pauli_sum_matrix(jw_majorana(l, 3));
            const cplx two_pt = dr::quad_form(v, dr::mul(gk, gl));
            const cplx expect = cplx(0, 1) * two_pt;
            CHECK(std::abs(g.gamma(k, l) - expect.real()) < 1e-12);
        }
}

TEST_CASE("matchgate unitary layout and validation") {
    Matchgate id{{1, 0, 0, 1}, {1, 0, 0, 1}};
    auto u = matchgate_unitary(id);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(u[i * 4 + j] - (i == j ? 1.0 : 0.0)) < 1e-15);

    // iSWAP(pi/4)^dag block: A = I, B = [[0,-i],[-i,0]], det(A) = det(B) = 1
    const cplx mi(0, -1);
    Matchgate isw{{1, 0, 0, 1}, {0, mi, mi, 0}};
    auto v = matchgate_unitary(isw);
    auto w = two_pauli_rotation(PauliOp::X, PauliOp::X, -std::numbers::pi / 4);
    auto w2 = two_pauli_rotation(PauliOp::Y, PauliOp::Y, -std::numbers::pi / 4);
    // compose the commuting exchange factors
    std::array<cplx, 16> ex{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) ex[i * 4 + j] += w[i * 4 + k] * w2[k * 4 + j];
    for (int k = 0; k < 16; ++k) CHECK(std::abs(v[k] - ex[k]) < 1e-13);

    // random SU(2) pair with equal determinants is unitary
    RngStream rng(13);
    auto su2 = [&] {
        const double a = rng.uniform(0, 3), nx = rng.uniform(-1, 1), ny = rng.uniform(-1, 1),
                     nz = rng.uniform(-1, 1);
        const double nn = std::sqrt(nx * nx + ny * ny + nz * nz);
        const cplx I(0, 1);
        return std::array<cplx, 4>{std::cos(a) + I * std::sin(a) * nz / nn,
                                   (I * nx / nn + ny / nn) * std::sin(a),
                                   (I * nx / nn - ny / nn) * std::sin(a),
                                   std::cos(a) - I * std::sin(a) * nz / nn};
    };
    Matchgate rnd{su2(), su2()};
    auto ur = matchgate_unitary(rnd);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            cplx dot = 0;
            for (int k = 0; k < 4; ++k) dot += std::conj(ur[k * 4 + i]) * ur[k * 4 + j];
            CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-12);
        }

    Matchgate bad{{1, 0, 0, 1}, {0, 1, 1, 0}};  // det +1 vs -1
    CHECK_THROWS_AS(matchgate_unitary(bad), std::invalid_argument);
}

TEST_CASE("the six matchgate generator identities") {
    // two-qubit identities between Pauli words and Majorana quadratics under
    // the Jordan-Wigner convention, checked as dense 4x4 matrices
    const int n = 2;
    auto gm = [&](int mode) { return dr::pauli_sum_matrix(jw_majorana(mode, n)); };
    auto word = [&](std::map<int, PauliOp> ops) { return dr::pauli_word(n, ops); };
    auto scaled = [](dr::CMat m, cplx s) {
        for (auto& row : m) for (auto& v : row) v *= s;
        return m;
    };
    const cplx I(0, 1);
    struct Identity {
        dr::CMat lhs, rhs;
    };
    const Identity ids[] = {
        {word({{0, PauliOp::X}, {1, PauliOp::X}}), scaled(dr::mul(gm(1), gm(2)), -I)},
        {word({{0, PauliOp::X}, {1, PauliOp::Y}}), scaled(dr::mul(gm(1), gm(3)), -I)},
        {word({{0, PauliOp::Y}, {1, PauliOp::X}}), scaled(dr::mul(gm(0), gm(2)), I)},
        {word({{0, PauliOp::Y}, {1, PauliOp::Y}}), scaled(dr::mul(gm(0), gm(3)), I)},
        {word({{0, PauliOp::Z}}), scaled(dr::mul(gm(0), gm(1)), -I)},
        {word({{1, PauliOp::Z}}), scaled(dr::mul(gm(2), gm(3)), -I)},
    };
    for (const auto& id : ids)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::abs(id.lhs[i][j] - id.rhs[i][j]) < 1e-12);
}

TEST_CASE("empty circuit gives the identity rotation") {
    auto r = rotation_from_circuit({}, {}, 3);
    CHECK(linalg::max_abs(r.r - Matrix::identity(6)) < 1e-15);
}

TEST_CASE("single Z rotation turns the on-qubit mode plane by 2a") {
    const double a = 0.4721;
    std::vector<PrimGate> circ{{PrimKind::RZ, 1, -1, 0, 1.0, 0.0}};
    auto r = rotation_from_circuit(circ, {a}, 3);
    CHECK(r.r(2, 2) == doctest::Approx(std::cos(2 * a)));
    CHECK(r.r(3, 3) == doctest::Approx(std::cos(2 * a)));
    CHECK(std::abs(r.r(2, 3)) == doctest::Approx(std::abs(std::sin(2 * a))));
    for (int k = 0; k < 6; ++k) {
        if (k == 2 || k == 3) continue;
        CHECK(r.r(k, k) == doctest::Approx(1.0));
    }
}

TEST_CASE("non-matchgate gates are rejected") {
    std::vector<PrimGate> rx{{PrimKind::RX, 0, -1, 0, 1.0, 0.0}};
    CHECK_THROWS_AS(rotation_from_circuit(rx, {0.3}, 2), classification_error);
    std::vector<PrimGate> zz{{PrimKind::ZZ, 0, 1, 0, 1.0, 0.0}};
    CHECK_THROWS_AS(rotation_from_circuit(zz, {0.3}, 2), classification_error);
    std::vector<PrimGate> far{{PrimKind::XX, 0, 2, 0, 1.0, 0.0}};
    CHECK_THROWS_AS(rotation_from_circuit(far, {0.3}, 3), classification_error);
}

TEST_CASE("holographic relation: covariance transforms as R Gamma R^T") {
    RngStream rng(2025);
    for (int rep = 0; rep < 12; ++rep) {
        const int n = 4 + rep % 3;  // up to 6 qubits
        std::vector<double> prep_params, params;
        // non-trivial Gaussian start: random matchgate prep on the reference
        auto prep = random_matchgate_circuit(n, 8, rng, prep_params);
        auto circ = random_matchgate_circuit(n, 14, rng, params);
        StateVector psi = new_zero_state(n);
        run_circuit(psi, prep, prep_params);
        auto gamma = covariance_from_state(psi);
        StateVector vpsi = psi;
        run_circuit(vpsi, circ, params);
        auto gamma_v = covariance_from_state(vpsi);
        auto r = rotation_from_circuit(circ, params, n);
        Matrix want = r.r * gamma.gamma * r.r.transposed();
        CHECK(linalg::max_abs(gamma_v.gamma - want) < 1e-10);
    }
}

TEST_CASE("conjugation by the identity is a no-op and spectra are invariant") {
    auto p = HubbardParams::half_filling(2, 1.0, 8.0);
    auto k = build_majorana_hamiltonian(p);
    auto same = conjugate_hamiltonian(k, GaussianRotation::identity(8));
    REQUIRE(same.terms().size() == k.terms().size());
    for (std::size_t i = 0; i < k.terms().size(); ++i) {
        CHECK(same.terms()[i].modes == k.terms()[i].modes);
        CHECK(std::abs(same.terms()[i].coeff - k.terms()[i].coeff) < 1e-13);
    }

    RngStream rng(31415);
    Matrix h(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < i; ++j) {
            h(i, j) = rng.uniform(-0.4, 0.4);
            h(j, i) = -h(i, j);
        }
    auto rot = rotation_from_generator((1.0 / 4.0) * h);
    auto kr = conjugate_hamiltonian(k, rot);
    CHECK(kr.is_hermitian(1e-9));
    // sorted spectra of the Jordan-Wigner images agree
    auto spectrum = [](const PauliSum& s) {
        auto m = dr::pauli_sum_matrix(s);
        const std::size_t dim = m.size();
        Matrix e(2 * dim, 2 * dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) {
                e(i, j) = m[i][j].real();
                e(dim + i, dim + j) = m[i][j].real();
                e(i, dim + j) = -m[i][j].imag();
                e(dim + i, j) = m[i][j].imag();
            }
        return linalg::sym_eig(e).values;
    };
    auto sa = spectrum(k.to_pauli());
    auto sb = spectrum(kr.to_pauli());
    for (std::size_t i = 0; i < sa.size(); ++i) CHECK(std::abs(sa[i] - sb[i]) < 1e-9);
}

TEST_CASE("rotation_from_generator") {
    CHECK(linalg::max_abs(rotation_from_generator(Matrix(4, 4)).r - Matrix::identity(4)) < 1e-15);
    Matrix h(2, 2);
    h(0, 1) = 0.3;
    h(1, 0) = -0.3;
    auto r = rotation_from_generator(h);
    CHECK(r.r(0, 0) == doctest::Approx(std::cos(1.2)));
    CHECK(r.r(0, 1) == doctest::Approx(std::sin(1.2)));
    Matrix bad(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(rotation_from_generator(bad), std::invalid_argument);
    // so(2M) basis dimension matches the 2L^2 - L angle count
    for (int L : {2, 4, 8}) {
        const int m = 2 * L;
        CHECK(m * (m - 1) / 2 == 2 * L * L - L);
    }
}

TEST_CASE("mean field: exact at U=0, variational at U>0, zero at t->0 limit") {
    HubbardParams u0{2, 1.0, 0.0, 0.0};
    CHECK(mean_field_energy(u0) == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(exact_ground_energy(u0, 2).energy == doctest::Approx(-2.0).epsilon(1e-10));

    auto p8 = HubbardParams::half_filling(2, 1.0, 8.0);
    CHECK(mean_field_energy(p8) >= exact_ground_energy(p8, 2).energy - 1e-12);

    // t -> 0 limit: the self-consistent symmetry-broken solution localizes
    // one electron per site, so kinetic and double-occupancy terms vanish
    HubbardParams tiny_t{2, 1e-9, 8.0, 4.0};
    CHECK(std::abs(mean_field_energy(tiny_t, true)) < 1e-6);
    // the single-shot branch stays paramagnetic and keeps the Hartree term
    CHECK(mean_field_energy(tiny_t) == doctest::Approx(p8.U * 2 / 4.0).epsilon(1e-6));
    // self-consistency never raises the energy and stays variational
    auto psc = HubbardParams::half_filling(2, 1.0, 8.0);
    CHECK(mean_field_energy(psc, true) <= mean_field_energy(psc) + 1e-12);
    CHECK(mean_field_energy(psc, true) >= exact_ground_energy(psc, 2).energy - 1e-12);
}

TEST_CASE("mean-field rotation reproduces the Slater energy through conjugation") {
    for (double U : {0.0, 8.0}) {
        for (int L : {2, 4}) {
            auto p = HubbardParams::half_filling(L, 1.0, U);
            auto mf = mean_field_state(p);
            auto k = build_majorana_hamiltonian(p);
            auto rotated = conjugate_hamiltonian(k, mf.rotation);
            auto obs = rotated.to_pauli();
            const double val = expectation(new_zero_state(2 * L), obs);
            CHECK(val == doctest::Approx(mf.grand_energy).epsilon(1e-9));
            CHECK(mf.energy == doctest::Approx(mf.grand_energy + p.mu * p.L).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(mean_field_state(HubbardParams::half_filling(3, 1.0, 8.0)),
                    std::invalid_argument);
}
