#include "efl/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace efl {

void CovarianceMatrix::validate(double tol) const {
    if (!linalg::is_antisymmetric(gamma, tol))
        throw std::runtime_error("CovarianceMatrix: not antisymmetric");
    // Williamson values: singular values of gamma, i.e. sqrt(eig(gamma^T gamma))
    linalg::Matrix gtg = gamma.transposed() * gamma;
    auto eig = linalg::sym_eig(gtg);
    for (double v : eig.values)
        if (v > 1.0 + 10 * tol)
            throw std::runtime_error("CovarianceMatrix: Williamson value above 1");
}

std::string CovarianceMatrix::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < gamma.rows(); ++i) {
        for (std::size_t j = 0; j < gamma.cols(); ++j) {
            if (j) os << ',';
            os << gamma(i, j);
        }
        os << '\n';
    }
    return os.str();
}

GaussianRotation::GaussianRotation(linalg::Matrix m) : r(std::move(m)) {
    if (!linalg::is_special_orthogonal(r, 1e-8))
        throw std::invalid_argument("GaussianRotation: matrix is not special orthogonal");
}

GaussianRotation GaussianRotation::identity(int n_modes) {
    return GaussianRotation(linalg::Matrix::identity(n_modes));
}

CovarianceMatrix covariance_from_state(const StateVector& state) {
    const int n_qubits = state.n_qubits();
    const int n_modes = 2 * n_qubits;
    linalg::Matrix g(n_modes, n_modes);
    for (int k = 0; k < n_modes; ++k) {
        const PauliTerm gk = jw_majorana(k, n_qubits).terms()[0];
        for (int l = k + 1; l < n_modes; ++l) {
            const PauliTerm gl = jw_majorana(l, n_qubits).terms()[0];
            const PauliTerm prod = pauli_mul(gk, gl);
            // <g_k g_l> is purely imaginary for k != l; Gamma_kl = i <g_k g_l>
            const cplx v = expectation_term(state, prod);
            if (std::abs(v.real()) > 1e-10)
                throw std::runtime_error("covariance_from_state: non-imaginary two-point function");
            g(k, l) = -v.imag();
            g(l, k) = v.imag();
        }
    }
    return {g};
}

std::array<cplx, 16> matchgate_unitary(const Matchgate& m) {
    const cplx det_a = m.a[0] * m.a[3] - m.a[1] * m.a[2];
    const cplx det_b = m.b[0] * m.b[3] - m.b[1] * m.b[2];
    if (std::abs(det_a - det_b) > 1e-12)
        throw std::invalid_argument("matchgate_unitary: det(A) != det(B)");
    std::array<cplx, 16> g{};
    // even-parity block {|00>, |11>} = local indices 0, 3
    g[0 * 4 + 0] = m.a[0];
    g[0 * 4 + 3] = m.a[1];
    g[3 * 4 + 0] = m.a[2];
    g[3 * 4 + 3] = m.a[3];
    // odd-parity block, local indices 1, 2
    g[1 * 4 + 1] = m.b[0];
    g[1 * 4 + 2] = m.b[1];
    g[2 * 4 + 1] = m.b[2];
    g[2 * 4 + 2] = m.b[3];
    return g;
}

namespace {

// Mode-plane rotation of one primitive e^{i angle P}: gate e^{beta g_a g_b}
// rotates the (a, b) plane by 2 beta.
struct PlaneRotation {
    int a, b;
    double beta;
};

PlaneRotation plane_of(const PrimGate& g, double angle) {
    int q1 = g.q1, q2 = g.q2;
    PrimKind kind = g.kind;
    if (kind == PrimKind::RZ) return {2 * q1, 2 * q1 + 1, angle};
    if (kind == PrimKind::RX || kind == PrimKind::ZZ)
        throw classification_error("rotation_from_circuit: gate is not a matchgate generator");
    if (q1 > q2) {
        std::swap(q1, q2);
        if (kind == PrimKind::XY) kind = PrimKind::YX;
        else if (kind == PrimKind::YX) kind = PrimKind::XY;
    }
    if (q2 != q1 + 1)
        throw classification_error("rotation_from_circuit: matchgates must act on adjacent qubits");
    switch (kind) {
        case PrimKind::XX: return {2 * q1 + 1, 2 * q1 + 2, angle};
        case PrimKind::YY: return {2 * q1, 2 * q1 + 3, -angle};
        case PrimKind::XY: return {2 * q1 + 1, 2 * q1 + 3, angle};
        case PrimKind::YX: return {2 * q1, 2 * q1 + 2, -angle};
        default: throw classification_error("rotation_from_circuit: unsupported gate");
    }
}

}  // namespace

GaussianRotation rotation_from_circuit(const std::vector<PrimGate>& circuit,
                                       const std::vector<double>& params, int n_qubits) {
    const int n_modes = 2 * n_qubits;
    linalg::Matrix r = linalg::Matrix::identity(n_modes);
    for (const auto& g : circuit) {
        const PlaneRotation pr = plane_of(g, prim_angle(g, params));
        const double c = std::cos(2 * pr.beta), s = std::sin(2 * pr.beta);
        // columns a and b of the per-gate rotation; left-multiply onto r
        for (int row = 0; row < n_modes; ++row) {
            const double ra = r(pr.a, row), rb = r(pr.b, row);
            r(pr.a, row) = c * ra + s * rb;
            r(pr.b, row) = -s * ra + c * rb;
        }
    }
    return GaussianRotation(std::move(r));
}

MajoranaPolynomial conjugate_hamiltonian(const MajoranaPolynomial& h, const GaussianRotation& r) {
    return h.substituted(r.r);
}

GaussianRotation rotation_from_generator(const linalg::Matrix& h) {
    if (!linalg::is_antisymmetric(h, 1e-10))
        throw std::invalid_argument("rotation_from_generator: generator must be antisymmetric");
    return GaussianRotation(linalg::expm(4.0 * h));
}

namespace {

struct MeanFieldOrbitals {
    // per-position x per-mode orbital rotation (2L x 2L, block diagonal in spin)
    linalg::Matrix w;
    std::vector<double> kinetic;  // mu-free eigenvalue per rotated mode
    std::vector<bool> filled;     // per rotated mode
    std::vector<double> n_up, n_dn;  // site densities
    double energy = 0.0;
};

MeanFieldOrbitals solve_mean_field(const HubbardParams& p, bool self_consistent) {
    p.validate();
    const int L = p.L;
    const JwLayout lay(L);
    linalg::Matrix chain(L, L);
    for (int j = 0; j + 1 < L; ++j) chain(j, j + 1) = chain(j + 1, j) = -p.t;

    // Hartree potentials per spin. The single-shot branch keeps them zero
    // (plain kinetic orbitals); the self-consistent branch iterates
    // v_{j,sigma} = U <n_{j,-sigma}> from a staggered symmetry-broken seed.
    std::vector<double> nu(L, 0.5), nd(L, 0.5);
    if (self_consistent)
        for (int j = 0; j < L; ++j) {
            nu[j] = j % 2 == 0 ? 0.95 : 0.05;
            nd[j] = 1.0 - nu[j];
        }
    const int max_scf = self_consistent ? 500 : 1;

    MeanFieldOrbitals out;
    for (int scf = 0; scf < max_scf; ++scf) {
        linalg::Matrix hu = chain, hd = chain;
        if (self_consistent)
            for (int j = 0; j < L; ++j) {
                hu(j, j) += p.U * nd[j];
                hd(j, j) += p.U * nu[j];
            }
        auto eu = linalg::sym_eig(hu);
        auto ed = linalg::sym_eig(hd);

        out.w = linalg::Matrix(2 * L, 2 * L);
        out.kinetic.assign(2 * L, 0.0);
        std::vector<double> scf_level(2 * L, 0.0);
        // rotated mode m: spin-up modes 0..L-1, spin-down modes L..2L-1
        for (int m = 0; m < L; ++m) {
            scf_level[m] = eu.values[m];
            scf_level[L + m] = ed.values[m];
            double ku = 0.0, kd = 0.0;
            for (int i = 0; i < L; ++i)
                for (int j = 0; j < L; ++j) {
                    ku += eu.vectors(i, m) * chain(i, j) * eu.vectors(j, m);
                    kd += ed.vectors(i, m) * chain(i, j) * ed.vectors(j, m);
                }
            out.kinetic[m] = ku;
            out.kinetic[L + m] = kd;
            for (int j = 1; j <= L; ++j) {
                out.w(lay.position(j, Spin::Up), m) = eu.vectors(j - 1, m);
                out.w(lay.position(j, Spin::Down), L + m) = ed.vectors(j - 1, m);
            }
        }
        // fill the L lowest mean-field levels; ties resolved by (level, spin
        // up first, index)
        std::vector<int> order(2 * L);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return scf_level[a] < scf_level[b]; });
        out.filled.assign(2 * L, false);
        for (int k = 0; k < L; ++k) out.filled[order[k]] = true;

        std::vector<double> new_nu(L, 0.0), new_nd(L, 0.0);
        for (int m = 0; m < 2 * L; ++m) {
            if (!out.filled[m]) continue;
            for (int j = 1; j <= L; ++j) {
                const double cu = out.w(lay.position(j, Spin::Up), m);
                const double cd = out.w(lay.position(j, Spin::Down), m);
                new_nu[j - 1] += cu * cu;
                new_nd[j - 1] += cd * cd;
            }
        }
        double delta = 0.0;
        for (int j = 0; j < L; ++j) {
            delta = std::max({delta, std::abs(new_nu[j] - nu[j]), std::abs(new_nd[j] - nd[j])});
            const double mix = self_consistent ? 0.6 : 1.0;
            nu[j] = (1 - mix) * nu[j] + mix * new_nu[j];
            nd[j] = (1 - mix) * nd[j] + mix * new_nd[j];
        }
        if (!self_consistent || delta < 1e-13) break;
    }
    out.n_up = nu;
    out.n_dn = nd;
    double kin = 0.0;
    for (int m = 0; m < 2 * L; ++m)
        if (out.filled[m]) kin += out.kinetic[m];
    double hartree = 0.0;
    for (int j = 0; j < L; ++j) hartree += p.U * out.n_up[j] * out.n_dn[j];
    out.energy = kin + hartree;
    return out;
}

}  // namespace

double mean_field_energy(const HubbardParams& p, bool self_consistent) {
    return solve_mean_field(p, self_consistent).energy;
}

MeanField mean_field_state(const HubbardParams& p, bool self_consistent) {
    if (p.L % 2 != 0)
        throw std::invalid_argument(
            "mean_field_state: the half-filled Slater determinant has odd parity for odd L and "
            "is not an SO rotation of the reference state; use mean_field_energy instead");
    const auto mf = solve_mean_field(p, self_consistent);
    const int n_modes = 4 * p.L;
    // quadrature expansion of the orbital rotation
    linalg::Matrix wq(n_modes, n_modes);
    for (int pos = 0; pos < 2 * p.L; ++pos)
        for (int m = 0; m < 2 * p.L; ++m) {
            wq(2 * pos, 2 * m) = mf.w(pos, m);
            wq(2 * pos + 1, 2 * m + 1) = mf.w(pos, m);
        }
    // flip the B quadrature of every empty rotated mode, then undo the
    // orbital rotation: R = F W^T maps the fully occupied reference onto the
    // Slater state (covariance: R^T Gamma_full R = W F Gamma_full F W^T)
    linalg::Matrix r(n_modes, n_modes);
    for (int m = 0; m < 2 * p.L; ++m) {
        const double flip = mf.filled[m] ? 1.0 : -1.0;
        for (int col = 0; col < n_modes; ++col) {
            r(2 * m, col) = wq(col, 2 * m);
            r(2 * m + 1, col) = flip * wq(col, 2 * m + 1);
        }
    }
    MeanField out{mf.energy, mf.energy - p.mu * p.L, GaussianRotation(std::move(r))};
    return out;
}

}  // namespace efl
