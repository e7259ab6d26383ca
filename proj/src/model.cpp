#include "efl/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

#include "efl/bessel.hpp"
#include "efl/linalg.hpp"

namespace efl {

void HubbardParams::validate() const {
    if (L < 1) throw std::invalid_argument("HubbardParams: L must be >= 1");
    if (t <= 0.0) throw std::invalid_argument("HubbardParams: t must be > 0");
    if (U < 0.0) throw std::invalid_argument("HubbardParams: U must be >= 0");
    if (!std::isfinite(mu)) throw std::invalid_argument("HubbardParams: mu must be finite");
}

PauliSum build_hamiltonian(const HubbardParams& p) {
    p.validate();
    const JwLayout lay(p.L);
    PauliSum h(p.n_qubits());
    for (Spin s : {Spin::Up, Spin::Down}) {
        for (int j = 1; j < p.L; ++j) {
            const int a = lay.position(j, s), b = lay.position(j + 1, s);
            h.add_term(p.t / 2.0, {{a, PauliOp::X}, {b, PauliOp::X}});
            h.add_term(p.t / 2.0, {{a, PauliOp::Y}, {b, PauliOp::Y}});
        }
    }
    const double zc = 0.5 * (p.U / 2.0 - p.mu);
    for (Spin s : {Spin::Up, Spin::Down})
        for (int j = 1; j <= p.L; ++j) h.add_term(zc, {{lay.position(j, s), PauliOp::Z}});
    for (int j = 1; j <= p.L; ++j)
        h.add_term(p.U / 4.0, {{lay.position(j, Spin::Up), PauliOp::Z},
                               {lay.position(j, Spin::Down), PauliOp::Z}});
    h.add_identity(p.L * (p.U / 4.0 - p.mu));
    h.canonicalize(-1.0);  // keep zero coefficients; term count stays 4(L-1)+2L+L+1
    return h;
}

PauliSum build_number_operator(int L) {
    if (L < 1) throw std::invalid_argument("build_number_operator: L must be >= 1");
    PauliSum n(2 * L);
    n.add_identity(static_cast<double>(L));
    for (int q = 0; q < 2 * L; ++q) n.add_term(0.5, {{q, PauliOp::Z}});
    n.canonicalize(-1.0);
    return n;
}

MajoranaPolynomial build_majorana_hamiltonian(const HubbardParams& p) {
    p.validate();
    const JwLayout lay(p.L);
    const std::complex<double> I(0.0, 1.0);
    MajoranaPolynomial h(4 * p.L);
    auto A = [](int pos) { return 2 * pos; };
    auto B = [](int pos) { return 2 * pos + 1; };
    for (Spin s : {Spin::Up, Spin::Down}) {
        for (int j = 1; j < p.L; ++j) {
            const int pj = lay.position(j, s), pj1 = lay.position(j + 1, s);
            h.add_term(I * p.t / 2.0, {A(pj1), B(pj)});
            h.add_term(I * p.t / 2.0, {A(pj), B(pj1)});
        }
    }
    const std::complex<double> zc = -I * 0.5 * (p.U / 2.0 - p.mu);
    for (Spin s : {Spin::Up, Spin::Down})
        for (int j = 1; j <= p.L; ++j) {
            const int pos = lay.position(j, s);
            h.add_term(zc, {A(pos), B(pos)});
        }
    for (int j = 1; j <= p.L; ++j) {
        const int up = lay.position(j, Spin::Up), dn = lay.position(j, Spin::Down);
        h.add_term(-p.U / 4.0, {A(up), B(up), A(dn), B(dn)});
    }
    h.add_term(p.L * (p.U / 4.0 - p.mu), {});
    h.canonicalize();
    return h;
}

std::vector<std::pair<int, int>> interaction_pairs(int L) {
    const JwLayout lay(L);
    std::set<std::pair<int, int>> pairs;
    for (int p = 0; p + 1 < 2 * L; ++p) pairs.insert({p, p + 1});
    for (int j = 1; j <= L; ++j) {
        int a = lay.position(j, Spin::Up), b = lay.position(j, Spin::Down);
        pairs.insert({std::min(a, b), std::max(a, b)});
    }
    return {pairs.begin(), pairs.end()};
}

namespace {

// 10-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlX[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                            0.8650633666889845, 0.9739065285171717};
constexpr double kGlW[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                            0.1494513491505806, 0.0666713443086881};

double bethe_integrand(double w, double u) {
    // J1(w)/w stays finite at 0
    double j1_over_w;
    if (w < 1e-6) {
        j1_over_w = 0.5 - w * w / 16.0;
    } else {
        j1_over_w = bessel_j1(w) / w;
    }
    const double x = 0.5 * w * u;
    // 1/(1+e^x) in the overflow-safe form
    const double fermi = x > 0 ? std::exp(-x) / (1.0 + std::exp(-x)) : 1.0 / (1.0 + std::exp(x));
    return bessel_j0(w) * j1_over_w * fermi;
}

}  // namespace

double bethe_energy_density(double u) {
    if (u < 0.0 || !std::isfinite(u))
        throw std::invalid_argument("bethe_energy_density: U/t must be finite and >= 0");
    // Truncation point: either the exponential tail bound
    // e^{-u O/2} / (u O/2) or the oscillatory-decay bound 2/O^2 must be
    // below 1e-9; both are conservative envelopes of the integrand tail.
    const double osc_limit = 44722.0;  // 2/O^2 < 1e-9
    double omega = osc_limit;
    if (u > 0.0) {
        double o = 8.0;
        while (o < osc_limit) {
            const double x = 0.5 * u * o;
            if (x > 40.0 && std::exp(-x) / x < 1e-9) break;
            o *= 1.25;
        }
        omega = std::min(o, osc_limit);
    }
    // composite 10-point Gauss-Legendre, panel width <= 0.5
    const std::size_t panels = static_cast<std::size_t>(std::ceil(omega / 0.5));
    const double h = omega / static_cast<double>(panels);
    double sum = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double c = (static_cast<double>(k) + 0.5) * h;
        const double r = 0.5 * h;
        double panel = 0.0;
        for (int i = 0; i < 5; ++i)
            panel += kGlW[i] * (bethe_integrand(c + r * kGlX[i], u) +
                                bethe_integrand(c - r * kGlX[i], u));
        sum += panel * r;
    }
    return -4.0 * sum;
}

PauliSum build_energy_functional(const HubbardParams& p) {
    HubbardParams q = p;
    q.mu = 0.0;  // <H(t,U,mu)> + mu <N> = <H(t,U,0)>
    return build_hamiltonian(q);
}

double energy_expectation(const StateVector& state, const HubbardParams& p, EnergyMode mode) {
    p.validate();
    if (state.n_qubits() < p.n_qubits())
        throw std::invalid_argument("energy_expectation: register smaller than 2L");
    if (mode == EnergyMode::Full) return expectation(state, build_energy_functional(p));
    // half-filling form: hopping + (U/4) sum_j (<ZZ> + 1), no single-Z terms
    const JwLayout lay(p.L);
    PauliSum h(p.n_qubits());
    for (Spin s : {Spin::Up, Spin::Down})
        for (int j = 1; j < p.L; ++j) {
            const int a = lay.position(j, s), b = lay.position(j + 1, s);
            h.add_term(p.t / 2.0, {{a, PauliOp::X}, {b, PauliOp::X}});
            h.add_term(p.t / 2.0, {{a, PauliOp::Y}, {b, PauliOp::Y}});
        }
    for (int j = 1; j <= p.L; ++j)
        h.add_term(p.U / 4.0, {{lay.position(j, Spin::Up), PauliOp::Z},
                               {lay.position(j, Spin::Down), PauliOp::Z}});
    h.add_identity(p.L * p.U / 4.0);
    h.canonicalize(-1.0);
    return expectation(state, h);
}

double energy_expectation(const HubbardTermExpectations& e, const HubbardParams& p, EnergyMode mode) {
    p.validate();
    const std::size_t hop = static_cast<std::size_t>(2 * (p.L - 1));
    if (e.xx.size() != hop || e.yy.size() != hop || e.zz.size() != static_cast<std::size_t>(p.L))
        throw std::invalid_argument("energy_expectation: expectation vector sizes mismatch");
    double sum = 0.0;
    for (double v : e.xx) sum += p.t / 2.0 * v;
    for (double v : e.yy) sum += p.t / 2.0 * v;
    for (double v : e.zz) sum += p.U / 4.0 * v;
    sum += p.L * p.U / 4.0;
    if (mode == EnergyMode::Full) {
        if (e.z.size() != static_cast<std::size_t>(2 * p.L))
            throw std::invalid_argument("energy_expectation: z vector size mismatch");
        for (double v : e.z) sum += p.U / 4.0 * v;
    }
    return sum;
}

namespace {

// Apply one Pauli word to a computational basis state: |b> -> phase |b ^ x>.
std::complex<double> pauli_on_basis(const PauliTerm& t, std::uint64_t b) {
    const int n_y = std::popcount(t.x & t.z);
    std::complex<double> ph(1.0, 0.0);
    const std::complex<double> I(0.0, 1.0);
    for (int k = 0; k < (n_y & 3); ++k) ph *= I;
    if (std::popcount(b & t.z) & 1) ph = -ph;
    return t.coeff * ph;
}

std::vector<std::uint64_t> sector_basis(int n_qubits, int n_particles) {
    if (n_particles < 0 || n_particles > n_qubits)
        throw std::invalid_argument("sector out of range: empty particle sector");
    std::vector<std::uint64_t> basis;
    const int target_ones = n_qubits - n_particles;  // occupied orbitals are 0 bits
    const std::uint64_t dim = std::uint64_t{1} << n_qubits;
    for (std::uint64_t b = 0; b < dim; ++b)
        if (std::popcount(b) == target_ones) basis.push_back(b);
    return basis;
}

}  // namespace

SectorGround ground_in_sector(const PauliSum& op, int n_qubits, int n_particles) {
    if (n_qubits > 16) throw capacity_error("ground_in_sector: more than 16 qubits");
    const auto basis = sector_basis(n_qubits, n_particles);
    const std::size_t dim = basis.size();
    std::vector<std::int32_t> index(std::size_t{1} << n_qubits, -1);
    for (std::size_t i = 0; i < dim; ++i) index[basis[i]] = static_cast<std::int32_t>(i);

    SectorGround out;
    out.state = StateVector(n_qubits);

    // Column entries of the operator in the sector basis. Terms are combined
    // per target state before projecting, since individual strings (XX alone)
    // leave the sector even when their sum (XX + YY) conserves it.
    auto column_entries = [&](std::size_t col) {
        const std::uint64_t b = basis[col];
        std::map<std::uint64_t, double> acc;
        for (const auto& t : op.terms()) {
            const auto amp = pauli_on_basis(t, b);
            if (std::abs(amp.imag()) > 1e-12)
                throw std::runtime_error("ground_in_sector: complex matrix element");
            acc[b ^ t.x] += amp.real();
        }
        std::vector<std::pair<std::int32_t, double>> entries;
        for (const auto& [nb, v] : acc) {
            const std::int32_t row = index[nb];
            if (row < 0) {
                if (std::abs(v) > 1e-9)
                    throw std::runtime_error("ground_in_sector: operator leaves the sector");
                continue;
            }
            entries.emplace_back(row, v);
        }
        return entries;
    };

    std::vector<double> ground(dim);
    if (dim <= 2048) {
        linalg::Matrix m(dim, dim);
        for (std::size_t col = 0; col < dim; ++col)
            for (const auto& [row, v] : column_entries(col)) m(row, col) = v;
        // symmetry guard
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (std::abs(m(i, j) - m(j, i)) > 1e-10)
                    throw std::runtime_error("ground_in_sector: non-symmetric matrix");
        auto eig = linalg::sym_eig(m);
        out.energy = eig.values[0];
        for (std::size_t i = 0; i < dim; ++i) ground[i] = eig.vectors(i, 0);
    } else {
        std::vector<std::vector<std::pair<std::int32_t, double>>> cols(dim);
        for (std::size_t col = 0; col < dim; ++col) cols[col] = column_entries(col);
        auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
            y.assign(dim, 0.0);
            for (std::size_t col = 0; col < dim; ++col) {
                const double xv = x[col];
                if (xv == 0.0) continue;
                for (const auto& [row, v] : cols[col]) y[row] += v * xv;
            }
        };
        auto lz = linalg::lanczos_lowest(dim, apply);
        if (!lz.converged) throw std::runtime_error("ground_in_sector: Lanczos did not converge");
        out.energy = lz.value;
        ground = std::move(lz.vector);
    }
    for (std::size_t i = 0; i < dim; ++i) out.state.amp(basis[i]) = ground[i];
    return out;
}

SectorGround exact_ground_energy(const HubbardParams& p, int n_particles) {
    p.validate();
    return ground_in_sector(build_energy_functional(p), p.n_qubits(), n_particles);
}

double full_space_ground_energy(const PauliSum& op) {
    const int n = op.n_qubits();
    if (n > 12) throw capacity_error("full_space_ground_energy: more than 12 qubits");
    const std::size_t dim = std::size_t{1} << n;
    linalg::Matrix m(dim, dim);
    for (std::size_t b = 0; b < dim; ++b) {
        for (const auto& t : op.terms()) {
            const std::uint64_t nb = b ^ t.x;
            const auto amp = pauli_on_basis(t, b);
            if (std::abs(amp.imag()) > 1e-12)
                throw std::runtime_error("full_space_ground_energy: complex matrix element");
            m(nb, b) += amp.real();
        }
    }
    return linalg::sym_eig(m).values[0];
}

double energy_density_deviation(double energy, const HubbardParams& p) {
    return energy / (p.L * p.t) - bethe_energy_density(p.U / p.t);
}

}  // namespace efl
