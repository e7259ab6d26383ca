#include "efl/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace efl {

void MajoranaPolynomial::add_term(std::complex<double> coeff, std::vector<int> modes) {
    for (int m : modes)
        if (m < 0 || m >= n_modes_)
            throw std::invalid_argument("MajoranaPolynomial::add_term: mode out of range");
    terms_.push_back({std::move(modes), coeff});
}

void MajoranaPolynomial::canonicalize(double drop_tol) {
    for (auto& t : terms_) {
        // insertion sort, counting transpositions
        int swaps = 0;
        auto& m = t.modes;
        for (std::size_t i = 1; i < m.size(); ++i) {
            int v = m[i];
            std::size_t j = i;
            while (j > 0 && m[j - 1] > v) {
                m[j] = m[j - 1];
                --j;
                ++swaps;
            }
            m[j] = v;
        }
        if (swaps & 1) t.coeff = -t.coeff;
        // cancel adjacent equal pairs: gamma^2 = 1 (equal modes are adjacent
        // after sorting, and removing an adjacent pair needs no extra sign)
        std::vector<int> reduced;
        reduced.reserve(m.size());
        for (std::size_t i = 0; i < m.size();) {
            if (i + 1 < m.size() && m[i] == m[i + 1]) {
                i += 2;
            } else {
                reduced.push_back(m[i]);
                ++i;
            }
        }
        m = std::move(reduced);
    }
    std::sort(terms_.begin(), terms_.end(), [](const MajoranaTerm& a, const MajoranaTerm& b) {
        if (a.modes.size() != b.modes.size()) return a.modes.size() < b.modes.size();
        return a.modes < b.modes;
    });
    std::vector<MajoranaTerm> merged;
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().modes == t.modes)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : merged)
        if (std::abs(t.coeff) > drop_tol) terms_.push_back(std::move(t));
}

bool MajoranaPolynomial::is_hermitian(double tol) const {
    // (c g_{a1}..g_{ak})^dag = conj(c) g_{ak}..g_{a1} = conj(c) (-1)^{k(k-1)/2} g_{a1}..g_{ak}
    for (const auto& t : terms_) {
        const std::size_t k = t.modes.size();
        const double sign = ((k * (k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
        const std::complex<double> adj = std::conj(t.coeff) * sign;
        if (std::abs(adj - t.coeff) > tol) return false;
    }
    return true;
}

PauliSum jw_majorana(int mode, int n_qubits) {
    PauliSum s(n_qubits);
    const int p = mode / 2;
    std::map<int, PauliOp> ops;
    for (int q = 0; q < p; ++q) ops[q] = PauliOp::Z;
    ops[p] = (mode % 2 == 0) ? PauliOp::X : PauliOp::Y;
    s.add_term(1.0, ops);
    return s;
}

PauliSum MajoranaPolynomial::to_pauli() const {
    const int n_qubits = n_modes_ / 2;
    PauliSum out(n_qubits);
    for (const auto& t : terms_) {
        PauliTerm acc{0, 0, t.coeff};
        for (int m : t.modes) {
            const PauliSum g = jw_majorana(m, n_qubits);
            acc = pauli_mul(acc, g.terms()[0]);
        }
        out.add_raw(acc);
    }
    out.canonicalize();
    return out;
}

MajoranaPolynomial MajoranaPolynomial::substituted(const linalg::Matrix& r) const {
    if (static_cast<int>(r.rows()) != n_modes_ || static_cast<int>(r.cols()) != n_modes_)
        throw std::invalid_argument("MajoranaPolynomial::substituted: size mismatch");
    MajoranaPolynomial out(n_modes_);
    for (const auto& t : terms_) {
        // multiply out (sum_k R_{k,m1} g_k)(sum_k R_{k,m2} g_k)... merging as we go
        std::vector<MajoranaTerm> acc{{{}, t.coeff}};
        for (int m : t.modes) {
            MajoranaPolynomial partial(n_modes_);
            for (const auto& a : acc) {
                for (int k = 0; k < n_modes_; ++k) {
                    const double w = r(k, m);
                    if (w == 0.0) continue;
                    auto modes = a.modes;
                    modes.push_back(k);
                    partial.terms_.push_back({std::move(modes), a.coeff * w});
                }
            }
            partial.canonicalize(1e-15);
            acc = std::move(partial.terms_);
        }
        for (auto& a : acc) out.terms_.push_back(std::move(a));
    }
    out.canonicalize();
    return out;
}

MajoranaPolynomial MajoranaPolynomial::replaced(const linalg::Matrix& a) const {
    MajoranaPolynomial out(n_modes_);
    for (const auto& t : terms_) {
        for (std::size_t slot = 0; slot < t.modes.size(); ++slot) {
            const int m = t.modes[slot];
            for (int l = 0; l < n_modes_; ++l) {
                const double w = a(l, m);
                if (w == 0.0) continue;
                auto modes = t.modes;
                modes[slot] = l;
                out.terms_.push_back({std::move(modes), t.coeff * w});
            }
        }
    }
    out.canonicalize();
    return out;
}

linalg::Matrix MajoranaPolynomial::quadratic_coefficient_matrix() const {
    linalg::Matrix c(n_modes_, n_modes_);
    for (const auto& t : terms_) {
        if (t.modes.size() != 2) continue;
        // Hermitian quadratics have purely imaginary coefficients; store the
        // real matrix h with term = i h_ab gamma_a gamma_b, h antisymmetric.
        const double h = t.coeff.imag();
        c(t.modes[0], t.modes[1]) += h;
        c(t.modes[1], t.modes[0]) -= h;
    }
    return c;
}

std::complex<double> MajoranaPolynomial::constant_term() const {
    for (const auto& t : terms_)
        if (t.modes.empty()) return t.coeff;
    return 0.0;
}

}  // namespace efl
