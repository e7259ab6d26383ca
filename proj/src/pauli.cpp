#include "efl/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace efl {

namespace {

constexpr std::complex<double> kI(0.0, 1.0);

// Single-qubit product table in (x, z) encoding. Returns the phase of
// O(x1,z1) * O(x2,z2) relative to O(x1^x2, z1^z2).
std::complex<double> site_phase(bool x1, bool z1, bool x2, bool z2) {
    // Identity on either side
    if (!x1 && !z1) return 1.0;
    if (!x2 && !z2) return 1.0;
    auto code = [](bool x, bool z) { return x ? (z ? 2 : 1) : 3; };  // 1=X,2=Y,3=Z
    const int a = code(x1, z1), b = code(x2, z2);
    if (a == b) return 1.0;  // P*P = I
    // XY=iZ, YZ=iX, ZX=iY and anti-cyclic gives -i
    const bool cyclic = (a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1);
    return cyclic ? kI : -kI;
}

}  // namespace

int PauliTerm::weight() const { return std::popcount(x | z); }

PauliTerm pauli_mul(const PauliTerm& a, const PauliTerm& b) {
    PauliTerm r;
    r.x = a.x ^ b.x;
    r.z = a.z ^ b.z;
    std::complex<double> phase = 1.0;
    std::uint64_t support = (a.x | a.z) & (b.x | b.z);
    while (support) {
        const int q = std::countr_zero(support);
        support &= support - 1;
        const std::uint64_t bit = 1ull << q;
        phase *= site_phase(a.x & bit, a.z & bit, b.x & bit, b.z & bit);
    }
    r.coeff = a.coeff * b.coeff * phase;
    return r;
}

void PauliSum::add_term(std::complex<double> coeff, const std::map<int, PauliOp>& ops) {
    PauliTerm t;
    t.coeff = coeff;
    for (const auto& [q, op] : ops) {
        if (q < 0 || q >= n_qubits_)
            throw std::invalid_argument("PauliSum::add_term: qubit index out of range");
        const std::uint64_t bit = 1ull << q;
        switch (op) {
            case PauliOp::X: t.x |= bit; break;
            case PauliOp::Y: t.x |= bit; t.z |= bit; break;
            case PauliOp::Z: t.z |= bit; break;
        }
    }
    terms_.push_back(t);
}

void PauliSum::canonicalize(double drop_tol) {
    std::sort(terms_.begin(), terms_.end(), [](const PauliTerm& a, const PauliTerm& b) {
        return a.z != b.z ? a.z < b.z : a.x < b.x;
    });
    std::vector<PauliTerm> merged;
    for (const auto& t : terms_) {
        if (!merged.empty() && merged.back().x == t.x && merged.back().z == t.z)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    terms_.clear();
    for (const auto& t : merged)
        if (std::abs(t.coeff) > drop_tol) terms_.push_back(t);
}

bool PauliSum::is_hermitian(double tol) const {
    for (const auto& t : terms_)
        if (std::abs(t.coeff.imag()) > tol) return false;
    return true;
}

int PauliSum::max_weight() const {
    int w = 0;
    for (const auto& t : terms_) w = std::max(w, t.weight());
    return w;
}

std::map<int, PauliOp> PauliSum::ops_of(const PauliTerm& t) const {
    std::map<int, PauliOp> ops;
    for (int q = 0; q < n_qubits_; ++q) {
        const std::uint64_t bit = 1ull << q;
        const bool x = t.x & bit, z = t.z & bit;
        if (x && z) ops[q] = PauliOp::Y;
        else if (x) ops[q] = PauliOp::X;
        else if (z) ops[q] = PauliOp::Z;
    }
    return ops;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
    PauliSum r = *this;
    for (const auto& t : other.terms_) r.terms_.push_back(t);
    r.canonicalize();
    return r;
}

PauliSum PauliSum::operator*(const PauliSum& other) const {
    PauliSum r(n_qubits_);
    for (const auto& a : terms_)
        for (const auto& b : other.terms_) r.terms_.push_back(pauli_mul(a, b));
    r.canonicalize();
    return r;
}

PauliSum PauliSum::scaled(std::complex<double> s) const {
    PauliSum r = *this;
    for (auto& t : r.terms_) t.coeff *= s;
    return r;
}

PauliSum PauliSum::commutator(const PauliSum& other) const {
    PauliSum ab = (*this) * other;
    PauliSum ba = other * (*this);
    PauliSum r(n_qubits_);
    for (const auto& t : ab.terms()) r.add_raw(t);
    for (auto t : ba.terms()) {
        t.coeff = -t.coeff;
        r.add_raw(t);
    }
    r.canonicalize();
    return r;
}

PauliSum PauliSum::relabeled(const std::vector<int>& map, int new_n_qubits) const {
    PauliSum r(new_n_qubits);
    for (const auto& t : terms_) {
        PauliTerm nt;
        nt.coeff = t.coeff;
        std::uint64_t support = t.x | t.z;
        while (support) {
            const int q = std::countr_zero(support);
            support &= support - 1;
            if (q >= static_cast<int>(map.size()) || map[q] < 0 || map[q] >= new_n_qubits)
                throw std::invalid_argument("PauliSum::relabeled: unmapped qubit");
            const std::uint64_t ob = 1ull << q, nb = 1ull << map[q];
            if (t.x & ob) nt.x |= nb;
            if (t.z & ob) nt.z |= nb;
        }
        r.add_raw(nt);
    }
    r.canonicalize();
    return r;
}

std::string PauliSum::to_text(bool prune_zero) const {
    std::ostringstream os;
    char buf[64];
    for (const auto& t : terms_) {
        if (prune_zero && std::abs(t.coeff) == 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.17g", t.coeff.real());
        os << buf;
        for (const auto& [q, op] : ops_of(t)) {
            os << ' ' << (op == PauliOp::X ? 'X' : op == PauliOp::Y ? 'Y' : 'Z') << '@' << q;
        }
        os << '\n';
    }
    return os.str();
}

PauliSum PauliSum::from_text(const std::string& text, int n_qubits) {
    PauliSum r(n_qubits);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        double c;
        if (!(ls >> c)) throw std::invalid_argument("PauliSum::from_text: bad coefficient line: " + line);
        std::map<int, PauliOp> ops;
        std::string tok;
        while (ls >> tok) {
            if (tok.size() < 3 || tok[1] != '@')
                throw std::invalid_argument("PauliSum::from_text: bad operator token: " + tok);
            PauliOp op;
            switch (tok[0]) {
                case 'X': op = PauliOp::X; break;
                case 'Y': op = PauliOp::Y; break;
                case 'Z': op = PauliOp::Z; break;
                default: throw std::invalid_argument("PauliSum::from_text: bad operator token: " + tok);
            }
            ops[std::stoi(tok.substr(2))] = op;
        }
        r.add_term(c, ops);
    }
    r.canonicalize(-1.0);  // keep explicit zero-coefficient terms
    return r;
}

}  // namespace efl
