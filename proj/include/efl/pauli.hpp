#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace efl {

enum class PauliOp : std::uint8_t { X, Y, Z };

// One Pauli word c * P_0 P_1 ... with P_q in {I, X, Y, Z}. Qubit q carries X
// if bit q of x is set (and z clear), Z if bit q of z is set (and x clear),
// Y if both are set. The coefficient is a plain complex factor of the word
// built from the literal X/Y/Z matrices; no i^{..} encoding is folded in.
struct PauliTerm {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    std::complex<double> coeff = 0.0;

    bool is_identity() const { return x == 0 && z == 0; }
    int weight() const;
};

// Product of two Pauli words including the accumulated phase.
PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b);

// Real-weighted sum of Pauli strings on n qubits. Hermitian by construction:
// canonicalize() asserts that every merged coefficient is real up to 1e-12
// unless relaxed. Used for the Hamiltonian, the number operator and all
// observables.
class PauliSum {
public:
    PauliSum() = default;
    explicit PauliSum(int n_qubits) : n_qubits_(n_qubits) {}

    int n_qubits() const { return n_qubits_; }
    void set_n_qubits(int n) { n_qubits_ = n; }

    const std::vector<PauliTerm>& terms() const { return terms_; }

    void add_term(std::complex<double> coeff, const std::map<int, PauliOp>& ops);
    void add_raw(const PauliTerm& t) { terms_.push_back(t); }
    void add_identity(std::complex<double> coeff) { terms_.push_back({0, 0, coeff}); }

    // Sort by (z, x), merge equal words, drop |coeff| <= drop_tol.
    void canonicalize(double drop_tol = 1e-14);

    bool is_hermitian(double tol = 1e-12) const;

    // Largest number of non-identity factors over all terms.
    int max_weight() const;

    std::map<int, PauliOp> ops_of(const PauliTerm& t) const;

    PauliSum operator+(const PauliSum& other) const;
    PauliSum operator*(const PauliSum& other) const;
    PauliSum scaled(std::complex<double> s) const;

    // [this, other] = this*other - other*this, canonicalized.
    PauliSum commutator(const PauliSum& other) const;

    // Relabel qubits through a permutation-like map: new_qubit = map[old_qubit].
    PauliSum relabeled(const std::vector<int>& map, int new_n_qubits) const;

    // Line-oriented text format, one term per line: `coeff op@qubit op@qubit ...`
    // The identity term is a bare coefficient line.
    std::string to_text(bool prune_zero = false) const;
    static PauliSum from_text(const std::string& text, int n_qubits);

private:
    int n_qubits_ = 0;
    std::vector<PauliTerm> terms_;
};

}  // namespace efl
