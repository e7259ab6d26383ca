#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace efl::linalg {

// Dense row-major real matrix. Small helper used by the eigensolvers, the
// Gaussian-rotation algebra and the optimizers; not a general-purpose library.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const double& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Matrix transposed() const;

    const std::vector<double>& data() const { return a_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);

bool is_antisymmetric(const Matrix& a, double tol = 1e-12);
// ||R R^T - I||_max <= tol and det(R) approx +1
bool is_special_orthogonal(const Matrix& r, double tol = 1e-10);

struct SymEig {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector of values[k]
};

// Dense symmetric eigensolver: Householder tridiagonalization followed by
// implicit-shift QL, eigenpairs sorted ascending.
SymEig sym_eig(Matrix a);

// Cholesky factorization solve for symmetric positive definite A.
// Returns false (and leaves x unspecified) if the factorization breaks down.
bool solve_spd(Matrix a, const std::vector<double>& b, std::vector<double>& x);

// Reusable lower-Cholesky factor for solving several right-hand sides.
class CholeskyFactor {
public:
    bool factor(Matrix a);  // false if not positive definite
    std::vector<double> solve(const std::vector<double>& b) const;

private:
    Matrix l_;
};

// exp(A) by scaling and squaring with a truncated Taylor series.
Matrix expm(const Matrix& a);

// Lowest eigenpair of a symmetric operator given by its action y = A x,
// via Lanczos with full reorthogonalization. Used for sector dimensions too
// large for the dense path.
struct LanczosResult {
    double value = 0.0;
    std::vector<double> vector;
    bool converged = false;
};
LanczosResult lanczos_lowest(std::size_t dim,
                             const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                             std::size_t max_iter = 400, double tol = 1e-13,
                             std::uint64_t seed = 12345);

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x);
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace efl::linalg
