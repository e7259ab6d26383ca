#pragma once

#include <utility>
#include <vector>

#include "efl/majorana.hpp"
#include "efl/pauli.hpp"
#include "efl/statevector.hpp"

namespace efl {

enum class Spin { Up, Down };

// Physical parameters of the 1D Fermi-Hubbard chain. Occupation convention:
// an occupied spin orbital is the Z = +1 eigenstate of its qubit, so
// n = (1 + Z)/2 and the all-zeros register is the fully occupied lattice.
struct HubbardParams {
    int L = 2;        // sites
    double t = 1.0;   // hopping
    double U = 8.0;   // on-site interaction
    double mu = 4.0;  // chemical potential

    static HubbardParams half_filling(int L, double t, double U) {
        return {L, t, U, U / 2.0};
    }

    bool is_half_filling(double tol = 1e-12) const { return std::abs(mu - U / 2.0) < tol; }
    int n_qubits() const { return 2 * L; }
    int target_particles() const { return L; }  // N = L at half filling

    void validate() const;
};

// Canonical Jordan-Wigner chain 1up, ..., Lup, Ldn, ..., 1dn. Hopping
// partners are adjacent on the chain, so together with the on-site ZZ pairs
// every Hamiltonian term acts on at most two qubits.
struct JwLayout {
    int L;

    explicit JwLayout(int sites) : L(sites) {}

    // site is 1-based as in the Hamiltonian sums
    int position(int site, Spin spin) const {
        return spin == Spin::Up ? site - 1 : 2 * L - site;
    }
    std::pair<int, Spin> site_of(int position) const {
        return position < L ? std::pair{position + 1, Spin::Up}
                            : std::pair{2 * L - position, Spin::Down};
    }
};

// Qubit Hamiltonian:
//   (t/2) sum_{sigma,j} (X_j X_{j+1} + Y_j Y_{j+1})
// + (1/2)(U/2 - mu) sum Z + (U/4) sum_j Z_{j,up} Z_{j,dn} + L(U/4 - mu) I.
// Zero-coefficient terms are kept so the term count is parameter-independent.
PauliSum build_hamiltonian(const HubbardParams& p);

// N = L I + (1/2) sum_q Z_q on 2L qubits.
PauliSum build_number_operator(int L);

// Majorana form of the Hamiltonian; its Jordan-Wigner image equals
// build_hamiltonian term by term.
MajoranaPolynomial build_majorana_hamiltonian(const HubbardParams& p);

// Interaction pairs of the model under the canonical layout: consecutive
// chain positions plus the on-site (up, dn) pairs, deduplicated.
std::vector<std::pair<int, int>> interaction_pairs(int L);

// Ground-state energy density of the infinite chain,
//   E0/(L t) = -4 I(u),  I(u) = int_0^inf J0 J1 / (w (1 + e^{w u / 2})) dw,
// evaluated to an absolute accuracy of 1e-6 (certified truncation below 1e-8).
double bethe_energy_density(double u_over_t);

enum class EnergyMode { Full, HalfFillingForm };

// Variational energy functional E = <H> + mu <N>. Full mode keeps the
// (U/4) sum Z residual; HalfFillingForm drops it (the two agree exactly when
// <N> = L). Both are independent of mu.
double energy_expectation(const StateVector& state, const HubbardParams& p, EnergyMode mode);

// Same functional from pre-measured term expectation values, ordered as the
// Hamiltonian builds them: xx/yy over (sigma, j), zz over sites, z over
// positions 0..2L-1.
struct HubbardTermExpectations {
    std::vector<double> xx, yy;  // 2(L-1) entries each
    std::vector<double> zz;      // L entries
    std::vector<double> z;       // 2L entries (unused in HalfFillingForm)
};
double energy_expectation(const HubbardTermExpectations& e, const HubbardParams& p, EnergyMode mode);

// The PauliSum of the energy functional <H> + mu <N> (mu cancels):
PauliSum build_energy_functional(const HubbardParams& p);

struct SectorGround {
    double energy = 0.0;
    StateVector state{1};
};

// Lowest eigenpair of an operator restricted to the fixed-particle-number
// sector (basis states with exactly n_particles occupied orbitals). Dense
// below 2049 sector dimension, Lanczos above.
SectorGround ground_in_sector(const PauliSum& op, int n_qubits, int n_particles);

// Sector-restricted ground state of the energy functional.
SectorGround exact_ground_energy(const HubbardParams& p, int n_particles);

// Minimum eigenvalue over the full 2^{n} space (dense; n <= 12 qubits).
double full_space_ground_energy(const PauliSum& op);

// E/(L t) - bethe_energy_density(U/t)
double energy_density_deviation(double energy, const HubbardParams& p);

}  // namespace efl
