#include "efl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

#include "efl/rng.hpp"

namespace efl::linalg {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product shape mismatch");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
    return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
    return c;
}

Matrix operator*(double s, const Matrix& a) {
    Matrix c = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
    return c;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (double v : a.data()) m = std::max(m, std::abs(v));
    return m;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

bool is_antisymmetric(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (std::abs(a(i, j) + a(j, i)) > tol) return false;
    return true;
}

bool is_special_orthogonal(const Matrix& r, double tol) {
    if (r.rows() != r.cols()) return false;
    Matrix g = r * r.transposed();
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= 1.0;
    if (max_abs(g) > tol) return false;
    // det via LU with partial pivoting
    Matrix a = r;
    const std::size_t n = a.rows();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            det = -det;
        }
        if (a(k, k) == 0.0) return false;
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return std::abs(det - 1.0) < 1e-6;
}

namespace {

// Householder reduction of a real symmetric matrix to tridiagonal form,
// followed by implicit-shift QL iteration (the classic tred2/tql2 pair).
void tred2(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n - 1; i >= 1; --i) {
        std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k)
                        a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] != 0.0) {
            for (std::size_t j = 0; j < i; ++j) {
                double g = 0.0;
                for (std::size_t k = 0; k < i; ++k) g += a(i, k) * a(k, j);
                for (std::size_t k = 0; k < i; ++k) a(k, j) -= g * a(k, i);
            }
        }
        d[i] = a(i, i);
        a(i, i) = 1.0;
        for (std::size_t j = 0; j < i; ++j) a(j, i) = a(i, j) = 0.0;
    }
}

double pythag(double a, double b) {
    const double aa = std::abs(a), ab = std::abs(b);
    if (aa > ab) {
        const double r = ab / aa;
        return aa * std::sqrt(1.0 + r * r);
    }
    if (ab == 0.0) return 0.0;
    const double r = aa / ab;
    return ab * std::sqrt(1.0 + r * r);
}

void tql2(std::vector<double>& d, std::vector<double>& e, Matrix& z) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 80) throw std::runtime_error("tql2: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = pythag(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

SymEig sym_eig(Matrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eig: square matrix required");
    const std::size_t n = a.rows();
    SymEig out;
    if (n == 0) return out;
    std::vector<double> d, e;
    tred2(a, d, e);
    tql2(d, e, a);
    // sort ascending, carrying columns
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = d[idx[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = a(i, idx[k]);
    }
    return out;
}

bool CholeskyFactor::factor(Matrix a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("CholeskyFactor: square matrix required");
    for (std::size_t j = 0; j < n; ++j) {
        double s = a(j, j);
        for (std::size_t k = 0; k < j; ++k) s -= a(j, k) * a(j, k);
        if (s <= 0.0 || !std::isfinite(s)) return false;
        const double ljj = std::sqrt(s);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double t = a(i, j);
            for (std::size_t k = 0; k < j; ++k) t -= a(i, k) * a(j, k);
            a(i, j) = t / ljj;
        }
    }
    l_ = std::move(a);
    return true;
}

std::vector<double> CholeskyFactor::solve(const std::vector<double>& b) const {
    const std::size_t n = l_.rows();
    if (b.size() != n) throw std::invalid_argument("CholeskyFactor::solve: size mismatch");
    std::vector<double> x = b;
    for (std::size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * x[k];
        x[i] = s / l_(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * x[k];
        x[ii] = s / l_(ii, ii);
    }
    return x;
}

bool solve_spd(Matrix a, const std::vector<double>& b, std::vector<double>& x) {
    if (a.cols() != a.rows() || b.size() != a.rows())
        throw std::invalid_argument("solve_spd: shape mismatch");
    CholeskyFactor f;
    if (!f.factor(std::move(a))) return false;
    x = f.solve(b);
    return true;
}

Matrix expm(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("expm: square matrix required");
    const std::size_t n = a.rows();
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(a(i, j));
        nrm = std::max(nrm, row);
    }
    int squarings = 0;
    double scale = 1.0;
    while (nrm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }
    Matrix as = scale * a;
    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k <= 24; ++k) {
        term = (1.0 / k) * (term * as);
        result = result + term;
        if (max_abs(term) < 1e-17) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
    std::vector<double> y(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

LanczosResult lanczos_lowest(std::size_t dim,
                             const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply,
                             std::size_t max_iter, double tol, std::uint64_t seed) {
    LanczosResult res;
    if (dim == 0) return res;
    if (dim == 1) {
        std::vector<double> x{1.0}, y(1);
        apply(x, y);
        res.value = y[0];
        res.vector = x;
        res.converged = true;
        return res;
    }
    RngStream rng(derive_stream_seed(seed, "lanczos"));
    std::vector<std::vector<double>> basis;
    std::vector<double> alpha, beta;
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    double nv = norm2(v);
    for (auto& x : v) x /= nv;
    basis.push_back(v);
    std::vector<double> w(dim);
    double prev = 0.0;
    int settle_count = 0;
    const std::size_t m_max = std::min(max_iter, dim);
    for (std::size_t j = 0; j < m_max; ++j) {
        apply(basis[j], w);
        double a = dot(w, basis[j]);
        alpha.push_back(a);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= a * basis[j][i];
        if (j > 0)
            for (std::size_t i = 0; i < dim; ++i) w[i] -= beta[j - 1] * basis[j - 1][i];
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) {
                const double c = dot(w, q);
                for (std::size_t i = 0; i < dim; ++i) w[i] -= c * q[i];
            }
        const double b = norm2(w);
        // tridiagonal eigensolve of the current Krylov projection
        const std::size_t m = alpha.size();
        Matrix t(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        SymEig te = sym_eig(t);
        const double cur = te.values[0];
        if (j > 3 && std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur)))
            ++settle_count;
        else
            settle_count = 0;
        if (settle_count >= 2) {
            res.value = cur;
            res.vector.assign(dim, 0.0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < dim; ++k)
                    res.vector[k] += te.vectors(i, 0) * basis[i][k];
            const double nr = norm2(res.vector);
            for (auto& x : res.vector) x /= nr;
            res.converged = true;
            return res;
        }
        prev = cur;
        if (b < 1e-13 || m == dim) {
            res.value = cur;
            res.vector.assign(dim, 0.0);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < dim; ++k)
                    res.vector[k] += te.vectors(i, 0) * basis[i][k];
            const double nr = norm2(res.vector);
            for (auto& x : res.vector) x /= nr;
            res.converged = true;
            return res;
        }
        beta.push_back(b);
        std::vector<double> q = w;
        for (auto& x : q) x /= b;
        basis.push_back(std::move(q));
    }
    res.converged = false;
    return res;
}

}  // namespace efl::linalg
