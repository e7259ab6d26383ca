#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "efl/pauli.hpp"

namespace efl {

using cplx = std::complex<double>;

struct capacity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Six-angle variational two-qubit element: X rotations, exchange angle,
// dispersive angle, Z rotations. Conventions are fixed once for the whole
// toolkit: R_X(a) = e^{iaX}, R_Z(a) = e^{iaZ}, exchange e^{-i theta (XX+YY)},
// dispersive e^{+i phi ZZ}, applied in that order.
struct FGateParams {
    double theta_x1 = 0.0;
    double theta_x2 = 0.0;
    double theta = 0.0;  // exchange
    double phi = 0.0;    // dispersive
    double theta_z1 = 0.0;
    double theta_z2 = 0.0;

    std::array<double, 6> as_array() const {
        return {theta_x1, theta_x2, theta, phi, theta_z1, theta_z2};
    }
    static FGateParams from_array(const std::array<double, 6>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
};

enum class MeasureBasis { AllX, AllY, AllZ };

// Dense statevector over 2^n amplitudes; qubit 0 is the least significant bit
// of the basis index.
class StateVector {
public:
    explicit StateVector(int n_qubits);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return amps_.size(); }

    cplx& amp(std::size_t i) { return amps_[i]; }
    const cplx& amp(std::size_t i) const { return amps_[i]; }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    std::vector<cplx>& amplitudes() { return amps_; }

    double norm_sq() const;

    void apply_1q(const std::array<cplx, 4>& m, int q);  // row-major 2x2
    // 4x4 row-major on local index l = bit(q1) + 2*bit(q2)
    void apply_2q(const std::array<cplx, 16>& m, int q1, int q2);

    bool approx_equal(const StateVector& other, double tol) const;

private:
    int n_;
    std::vector<cplx> amps_;
};

StateVector new_zero_state(int n_qubits);

// 2x2 rotation matrices with the toolkit's sign conventions.
std::array<cplx, 4> rx_matrix(double a);  // e^{iaX}
std::array<cplx, 4> rz_matrix(double a);  // e^{iaZ}
std::array<cplx, 4> h_matrix();
std::array<cplx, 4> sdg_matrix();

// e^{i a P x P'} for single Pauli words on two qubits, local convention as in
// StateVector::apply_2q.
std::array<cplx, 16> two_pauli_rotation(PauliOp p1, PauliOp p2, double a);

// Dense 4x4 of the full f element (see FGateParams for the order).
std::array<cplx, 16> f_gate_matrix(const FGateParams& p);

void apply_f_gate(StateVector& state, int q1, int q2, const FGateParams& p);

// <psi| O |psi> for a Hermitian PauliSum; throws if the imaginary residue
// exceeds 1e-10.
double expectation(const StateVector& state, const PauliSum& observable);
cplx expectation_term(const StateVector& state, const PauliTerm& term);

// Rotate every qubit into the requested product basis and sample bitstrings
// from |amplitude|^2. Deterministic for a fixed seed. Keys are bitstrings
// with qubit 0 first.
std::map<std::string, std::int64_t> sample_basis(const StateVector& state, MeasureBasis basis,
                                                 std::int64_t shots, std::uint64_t seed);

// Parameterized primitive gates the ansatz circuits are expanded into. Every
// primitive is e^{i * angle * G} with G a single Pauli word, which is what the
// parameter-shift rule needs.
enum class PrimKind : std::uint8_t { RX, RZ, XX, YY, ZZ, XY, YX };

struct PrimGate {
    PrimKind kind;
    int q1 = 0;
    int q2 = -1;          // unused for single-qubit kinds
    int param_slot = -1;  // -1: fixed angle
    double scale = 1.0;   // angle = scale * params[param_slot] (+ fixed)
    double fixed = 0.0;
};

double prim_angle(const PrimGate& g, const std::vector<double>& params);
void apply_prim(StateVector& state, const PrimGate& g, double angle);
void run_circuit(StateVector& state, const std::vector<PrimGate>& circuit,
                 const std::vector<double>& params);

}  // namespace efl
