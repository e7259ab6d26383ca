#pragma once

#include <complex>
#include <vector>

#include "efl/linalg.hpp"
#include "efl/pauli.hpp"

namespace efl {

// Polynomial in Majorana operators gamma_0 .. gamma_{2M-1} with
// {gamma_a, gamma_b} = 2 delta_ab and gamma^2 = 1. Mode 2p is the A
// quadrature (a^dag + a) of Jordan-Wigner position p, mode 2p+1 the B
// quadrature -i(a^dag - a).
struct MajoranaTerm {
    std::vector<int> modes;  // strictly increasing after canonicalization
    std::complex<double> coeff;
};

class MajoranaPolynomial {
public:
    MajoranaPolynomial() = default;
    explicit MajoranaPolynomial(int n_modes) : n_modes_(n_modes) {}

    int n_modes() const { return n_modes_; }
    const std::vector<MajoranaTerm>& terms() const { return terms_; }

    void add_term(std::complex<double> coeff, std::vector<int> modes);

    // Reorder each monomial to strictly increasing mode indices with
    // anticommutation signs, cancel repeated modes, merge like terms.
    void canonicalize(double drop_tol = 1e-13);

    bool is_hermitian(double tol = 1e-10) const;

    // Jordan-Wigner image: gamma_{2p} = Z_0..Z_{p-1} X_p,
    // gamma_{2p+1} = Z_0..Z_{p-1} Y_p, on n_modes/2 qubits.
    PauliSum to_pauli() const;

    // Substitute gamma_j -> sum_k R_{kj} gamma_k for an orthogonal R.
    MajoranaPolynomial substituted(const linalg::Matrix& r) const;

    // Derivative-style replacement: for each factor of each monomial, replace
    // gamma_m by sum_l A_{lm} gamma_l (sum over factors). This is the
    // generator action d/ds substituted(e^{sA}) at s = 0.
    MajoranaPolynomial replaced(const linalg::Matrix& a) const;

    // Coefficient matrix C of the quadratic part sum_{a<b} c_ab gamma_a
    // gamma_b, returned antisymmetric (C_ba = -c_ab / ...); entries are the
    // imaginary parts i*c so the matrix is real for Hermitian polynomials.
    linalg::Matrix quadratic_coefficient_matrix() const;

    std::complex<double> constant_term() const;

private:
    int n_modes_ = 0;
    std::vector<MajoranaTerm> terms_;
};

PauliSum jw_majorana(int mode, int n_qubits);

}  // namespace efl
