#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "efl/linalg.hpp"
#include "efl/majorana.hpp"
#include "efl/model.hpp"
#include "efl/statevector.hpp"

namespace efl {

struct classification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Antisymmetric matrix of Majorana two-point functions
// Gamma_kl = (i/2) tr(rho [g_k, g_l]).
struct CovarianceMatrix {
    linalg::Matrix gamma;

    int n_modes() const { return static_cast<int>(gamma.rows()); }
    void validate(double tol = 1e-10) const;  // antisymmetry and |lambda_k| <= 1
    std::string to_csv() const;
};

// Element of SO(2M) acting on Majorana modes as V g_j V^dag = sum_k R_kj g_k.
struct GaussianRotation {
    linalg::Matrix r;

    explicit GaussianRotation(linalg::Matrix m);
    static GaussianRotation identity(int n_modes);
    int n_modes() const { return static_cast<int>(r.rows()); }
};

// Two-qubit matchgate G(A, B): A acts on the even-parity subspace
// {|00>, |11>}, B on the odd-parity one, det(A) = det(B).
struct Matchgate {
    std::array<cplx, 4> a;
    std::array<cplx, 4> b;
};

// Covariance of a pure state on M qubits (2M modes).
CovarianceMatrix covariance_from_state(const StateVector& state);

// 4x4 unitary of the matchgate in the local convention of
// StateVector::apply_2q; throws if det(A) != det(B).
std::array<cplx, 16> matchgate_unitary(const Matchgate& m);

// SO(2M) rotation of a circuit of matchgate-generator primitives (RZ, XX,
// YY, XY, YX on adjacent qubits). Any other gate kind or a non-adjacent pair
// is a classification error.
GaussianRotation rotation_from_circuit(const std::vector<PrimGate>& circuit,
                                       const std::vector<double>& params, int n_qubits);

// gamma_j -> sum_k R_kj gamma_k applied to every monomial.
MajoranaPolynomial conjugate_hamiltonian(const MajoranaPolynomial& h, const GaussianRotation& r);

// R = e^{4h} for real antisymmetric h.
GaussianRotation rotation_from_generator(const linalg::Matrix& h);

// Hartree mean field of the Hubbard chain: diagonalize the quadratic part
// per spin, fill the L lowest orbitals, evaluate the Slater energy on the
// full Hamiltonian (kinetic + U sum <n_up><n_dn>, in the <H> + mu <N>
// normalization where the chemical potential cancels). The default is a
// single Hartree evaluation on the kinetic orbitals; the self-consistent
// flag iterates spin-dependent potentials from a staggered seed, which
// recovers the one-electron-per-site solution as t -> 0.
double mean_field_energy(const HubbardParams& p, bool self_consistent = false);

struct MeanField {
    double energy = 0.0;        // <H> + mu <N> form
    double grand_energy = 0.0;  // energy - mu L
    GaussianRotation rotation;  // maps the fully occupied reference onto the Slater state
};

// Even L only: the half-filled Slater determinant has parity (-1)^L and is
// reachable from the fully occupied reference by an SO rotation only when L
// is even.
MeanField mean_field_state(const HubbardParams& p, bool self_consistent = false);

}  // namespace efl
