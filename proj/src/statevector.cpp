#include "efl/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "efl/rng.hpp"

namespace efl {

namespace {
constexpr cplx kI(0.0, 1.0);
constexpr int kMaxQubits = 26;
}  // namespace

StateVector::StateVector(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw capacity_error("StateVector: qubit count out of supported range");
    amps_.assign(std::size_t{1} << n_qubits, cplx(0.0, 0.0));
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
}

void StateVector::apply_1q(const std::array<cplx, 4>& m, int q) {
    if (q < 0 || q >= n_) throw std::invalid_argument("apply_1q: qubit out of range");
    const std::size_t bit = std::size_t{1} << q;
    const std::size_t lo_mask = bit - 1;
    const std::size_t pairs = amps_.size() >> 1;
    for (std::size_t k = 0; k < pairs; ++k) {
        const std::size_t base = (k & lo_mask) | ((k & ~lo_mask) << 1);
        const cplx a0 = amps_[base];
        const cplx a1 = amps_[base | bit];
        amps_[base] = m[0] * a0 + m[1] * a1;
        amps_[base | bit] = m[2] * a0 + m[3] * a1;
    }
}

void StateVector::apply_2q(const std::array<cplx, 16>& m, int q1, int q2) {
    if (q1 == q2) throw std::invalid_argument("apply_2q: coincident qubit indices");
    if (q1 < 0 || q1 >= n_ || q2 < 0 || q2 >= n_)
        throw std::invalid_argument("apply_2q: qubit out of range");
    const std::size_t b1 = std::size_t{1} << q1;
    const std::size_t b2 = std::size_t{1} << q2;
    const std::size_t lo = std::min(b1, b2), hi = std::max(b1, b2);
    const std::size_t lo_mask = lo - 1, hi_mask = hi - 1;
    const std::size_t quads = amps_.size() >> 2;
    for (std::size_t k = 0; k < quads; ++k) {
        std::size_t base = (k & lo_mask) | ((k & ~lo_mask) << 1);
        base = (base & hi_mask) | ((base & ~hi_mask) << 1);
        const cplx v0 = amps_[base];
        const cplx v1 = amps_[base | b1];
        const cplx v2 = amps_[base | b2];
        const cplx v3 = amps_[base | b1 | b2];
        amps_[base] = m[0] * v0 + m[1] * v1 + m[2] * v2 + m[3] * v3;
        amps_[base | b1] = m[4] * v0 + m[5] * v1 + m[6] * v2 + m[7] * v3;
        amps_[base | b2] = m[8] * v0 + m[9] * v1 + m[10] * v2 + m[11] * v3;
        amps_[base | b1 | b2] = m[12] * v0 + m[13] * v1 + m[14] * v2 + m[15] * v3;
    }
}

bool StateVector::approx_equal(const StateVector& other, double tol) const {
    if (n_ != other.n_) return false;
    for (std::size_t i = 0; i < amps_.size(); ++i)
        if (std::abs(amps_[i] - other.amps_[i]) > tol) return false;
    return true;
}

StateVector new_zero_state(int n_qubits) {
    StateVector s(n_qubits);
    s.amp(0) = 1.0;
    return s;
}

std::array<cplx, 4> rx_matrix(double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {cplx(c, 0), cplx(0, s), cplx(0, s), cplx(c, 0)};
}

std::array<cplx, 4> rz_matrix(double a) {
    return {std::polar(1.0, a), 0.0, 0.0, std::polar(1.0, -a)};
}

std::array<cplx, 4> h_matrix() {
    const double s = 1.0 / std::sqrt(2.0);
    return {cplx(s, 0), cplx(s, 0), cplx(s, 0), cplx(-s, 0)};
}

std::array<cplx, 4> sdg_matrix() { return {cplx(1, 0), 0.0, 0.0, cplx(0, -1)}; }

namespace {

std::array<cplx, 4> pauli_matrix(PauliOp p) {
    switch (p) {
        case PauliOp::X: return {0.0, 1.0, 1.0, 0.0};
        case PauliOp::Y: return {0.0, -kI, kI, 0.0};
        default: return {1.0, 0.0, 0.0, -1.0};
    }
}

}  // namespace

std::array<cplx, 16> two_pauli_rotation(PauliOp p1, PauliOp p2, double a) {
    // local index l = bit(q1) + 2*bit(q2): kron(P2, P1)
    const auto m1 = pauli_matrix(p1);
    const auto m2 = pauli_matrix(p2);
    std::array<cplx, 16> g{};
    for (int r2 = 0; r2 < 2; ++r2)
        for (int r1 = 0; r1 < 2; ++r1)
            for (int c2 = 0; c2 < 2; ++c2)
                for (int c1 = 0; c1 < 2; ++c1)
                    g[(r1 + 2 * r2) * 4 + (c1 + 2 * c2)] = m2[r2 * 2 + c2] * m1[r1 * 2 + c1];
    // e^{iaG} = cos(a) I + i sin(a) G for G^2 = I
    std::array<cplx, 16> u{};
    const double c = std::cos(a), s = std::sin(a);
    for (int k = 0; k < 16; ++k) u[k] = kI * s * g[k];
    for (int d = 0; d < 4; ++d) u[d * 4 + d] += c;
    return u;
}

namespace {

std::array<cplx, 16> kron_1q(const std::array<cplx, 4>& on_q1, const std::array<cplx, 4>& on_q2) {
    std::array<cplx, 16> u{};
    for (int r2 = 0; r2 < 2; ++r2)
        for (int r1 = 0; r1 < 2; ++r1)
            for (int c2 = 0; c2 < 2; ++c2)
                for (int c1 = 0; c1 < 2; ++c1)
                    u[(r1 + 2 * r2) * 4 + (c1 + 2 * c2)] = on_q2[r2 * 2 + c2] * on_q1[r1 * 2 + c1];
    return u;
}

std::array<cplx, 16> mul4(const std::array<cplx, 16>& a, const std::array<cplx, 16>& b) {
    std::array<cplx, 16> c{};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const cplx aik = a[i * 4 + k];
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < 4; ++j) c[i * 4 + j] += aik * b[k * 4 + j];
        }
    return c;
}

}  // namespace

std::array<cplx, 16> f_gate_matrix(const FGateParams& p) {
    const auto xs = kron_1q(rx_matrix(p.theta_x1), rx_matrix(p.theta_x2));
    const auto ex = mul4(two_pauli_rotation(PauliOp::X, PauliOp::X, -p.theta),
                         two_pauli_rotation(PauliOp::Y, PauliOp::Y, -p.theta));
    const auto cp = two_pauli_rotation(PauliOp::Z, PauliOp::Z, p.phi);
    const auto zs = kron_1q(rz_matrix(p.theta_z1), rz_matrix(p.theta_z2));
    return mul4(zs, mul4(cp, mul4(ex, xs)));
}

void apply_f_gate(StateVector& state, int q1, int q2, const FGateParams& p) {
    if (q1 == q2) throw std::invalid_argument("apply_f_gate: coincident qubit indices");
    state.apply_2q(f_gate_matrix(p), q1, q2);
}

cplx expectation_term(const StateVector& state, const PauliTerm& term) {
    const std::size_t dim = state.dim();
    const std::uint64_t xm = term.x, zm = term.z;
    if (xm == 0 && zm == 0) return term.coeff;
    cplx acc = 0.0;
    // P|b> = phase(b) |b ^ xm> with phase from Z and Y factors at input bits b
    const int n_y = std::popcount(xm & zm);
    cplx ph_y = 1.0;
    for (int k = 0; k < (n_y & 3); ++k) ph_y *= kI;
    for (std::size_t b = 0; b < dim; ++b) {
        const cplx ab = state.amp(b);
        if (ab == cplx(0.0, 0.0)) continue;
        const int zpar = std::popcount(b & zm) & 1;
        cplx v = std::conj(state.amp(b ^ xm)) * ab * ph_y;
        acc += zpar ? -v : v;
    }
    return acc * term.coeff;
}

double expectation(const StateVector& state, const PauliSum& observable) {
    if (observable.n_qubits() > state.n_qubits())
        throw std::invalid_argument("expectation: observable register larger than state");
    cplx acc = 0.0;
    for (const auto& t : observable.terms()) acc += expectation_term(state, t);
    if (std::abs(acc.imag()) >= 1e-10)
        throw std::runtime_error("expectation: non-negligible imaginary residue");
    return acc.real();
}

std::map<std::string, std::int64_t> sample_basis(const StateVector& state, MeasureBasis basis,
                                                 std::int64_t shots, std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("sample_basis: shots must be >= 1");
    StateVector rotated = state;
    if (basis != MeasureBasis::AllZ) {
        for (int q = 0; q < state.n_qubits(); ++q) {
            if (basis == MeasureBasis::AllY) rotated.apply_1q(sdg_matrix(), q);
            rotated.apply_1q(h_matrix(), q);
        }
    }
    const std::size_t dim = rotated.dim();
    std::vector<double> cdf(dim);
    double run = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        run += std::norm(rotated.amp(i));
        cdf[i] = run;
    }
    const double total = run;
    RngStream rng(derive_stream_seed(seed, "sample"));
    std::map<std::string, std::int64_t> counts;
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * total;
        const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= dim) idx = dim - 1;
        std::string key(state.n_qubits(), '0');
        for (int q = 0; q < state.n_qubits(); ++q)
            if (idx & (std::size_t{1} << q)) key[q] = '1';
        ++counts[key];
    }
    return counts;
}

double prim_angle(const PrimGate& g, const std::vector<double>& params) {
    double a = g.fixed;
    if (g.param_slot >= 0) a += g.scale * params[g.param_slot];
    return a;
}

void apply_prim(StateVector& state, const PrimGate& g, double angle) {
    switch (g.kind) {
        case PrimKind::RX: state.apply_1q(rx_matrix(angle), g.q1); break;
        case PrimKind::RZ: state.apply_1q(rz_matrix(angle), g.q1); break;
        case PrimKind::XX: state.apply_2q(two_pauli_rotation(PauliOp::X, PauliOp::X, angle), g.q1, g.q2); break;
        case PrimKind::YY: state.apply_2q(two_pauli_rotation(PauliOp::Y, PauliOp::Y, angle), g.q1, g.q2); break;
        case PrimKind::ZZ: state.apply_2q(two_pauli_rotation(PauliOp::Z, PauliOp::Z, angle), g.q1, g.q2); break;
        case PrimKind::XY: state.apply_2q(two_pauli_rotation(PauliOp::X, PauliOp::Y, angle), g.q1, g.q2); break;
        case PrimKind::YX: state.apply_2q(two_pauli_rotation(PauliOp::Y, PauliOp::X, angle), g.q1, g.q2); break;
    }
}

void run_circuit(StateVector& state, const std::vector<PrimGate>& circuit,
                 const std::vector<double>& params) {
    for (const auto& g : circuit) apply_prim(state, g, prim_angle(g, params));
}

}  // namespace efl
