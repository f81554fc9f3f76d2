#pragma once

// Dense matrices for the discrete picture: derivative and Hamiltonian
// matrices, a cyclic Jacobi eigensolver, tridiagonal (Sturm bisection)
// eigensolvers, Cholesky factorisation, the Cholesky partner map, random
// symmetric matrices and the block supersymmetric system.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "numerics.hpp"
#include "random.hpp"

namespace susyqm {

/// Dense row-major real matrix.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : Matrix(n, n) {}
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows * cols) throw numerical_error("matrix data size mismatch");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(std::span<const double> d) {
        Matrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    std::vector<double> diagonal_entries() const {
        std::vector<double> d(std::min(rows_, cols_));
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
        return d;
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

    Matrix& operator+=(const Matrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    Matrix& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw numerical_error("matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            auto ci = c.row(i);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;
                auto bk = b.row(k);
                for (std::size_t j = 0; j < b.cols_; ++j) ci[j] += aik * bk[j];
            }
        }
        return c;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void check_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw numerical_error("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Square matrix with entries[i][j] == entries[j][i] bit for bit.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {
        if (!m_.square()) throw numerical_error("symmetric matrix must be square");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (m_(i, j) != m_(j, i)) throw numerical_error("matrix is not symmetric");
    }

    /// Copies the lower triangle onto the upper one.
    static SymmetricMatrix from_lower(Matrix m) {
        if (!m.square()) throw numerical_error("symmetric matrix must be square");
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < i; ++j) m(j, i) = m(i, j);
        return SymmetricMatrix(std::move(m));
    }

    std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }
    std::vector<double> diagonal() const { return m_.diagonal_entries(); }
    double frobenius_norm() const { return m_.frobenius_norm(); }

    /// this + shift * I
    SymmetricMatrix shifted(double shift) const {
        Matrix m = m_;
        for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += shift;
        return SymmetricMatrix(std::move(m));
    }

private:
    Matrix m_;
};

/// Lower-triangular factor with non-negative diagonal.
class LowerTriangular {
public:
    explicit LowerTriangular(Matrix m) : m_(std::move(m)) {
        if (!m_.square()) throw numerical_error("triangular factor must be square");
        for (std::size_t i = 0; i < m_.rows(); ++i) {
            if (m_(i, i) < 0.0) throw numerical_error("triangular factor has negative diagonal");
            for (std::size_t j = i + 1; j < m_.cols(); ++j)
                if (m_(i, j) != 0.0) throw numerical_error("factor is not lower triangular");
        }
    }

    std::size_t size() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    const Matrix& matrix() const noexcept { return m_; }

    /// L Lᵀ, symmetric by construction.
    SymmetricMatrix times_transpose() const {
        const std::size_t n = size();
        Matrix out(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto li = m_.row(i);
            for (std::size_t j = 0; j <= i; ++j) {
                auto lj = m_.row(j);
                double s = 0.0;
                for (std::size_t k = 0; k <= j; ++k) s += li[k] * lj[k];
                out(i, j) = s;
            }
        }
        return SymmetricMatrix::from_lower(std::move(out));
    }

    /// Lᵀ L, symmetric by construction.
    SymmetricMatrix transpose_times() const {
        const std::size_t n = size();
        Matrix out(n);
        for (std::size_t k = 0; k < n; ++k) {
            auto lk = m_.row(k);
            for (std::size_t i = 0; i <= k; ++i) {
                const double lki = lk[i];
                if (lki == 0.0) continue;
                auto oi = out.row(i);
                for (std::size_t j = 0; j <= i; ++j) oi[j] += lki * lk[j];
            }
        }
        return SymmetricMatrix::from_lower(std::move(out));
    }

private:
    Matrix m_;
};

// ---------------------------------------------------------------------------
// Discretised operators

/// Central-difference derivative: 1/2 on the superdiagonal, -1/2 below.
inline Matrix derivative_matrix(std::size_t n) {
    if (n < 2) throw numerical_error("derivative matrix needs n >= 2");
    Matrix d(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        d(i, i + 1) = 0.5;
        d(i + 1, i) = -0.5;
    }
    return d;
}

enum class HamiltonianStencil {
    /// -∂² with ∂ the central-difference matrix: offsets ±2, corner entries 1/4.
    central_squared,
    /// Standard second difference: 2 on the diagonal, -1 at offsets ±1 (Dirichlet).
    three_point,
};

/// -(η/h)² ∂² + diag(v). With spacing = eta = 1 and the central_squared
/// stencil this is the unit-spacing matrix picture.
inline SymmetricMatrix hamiltonian_matrix(std::span<const double> v, double spacing = 1.0,
                                          double eta = 1.0,
                                          HamiltonianStencil stencil = HamiltonianStencil::central_squared) {
    const std::size_t n = v.size();
    if (n < 3) throw numerical_error("hamiltonian matrix needs n >= 3");
    if (!(spacing > 0.0) || !(eta > 0.0)) throw numerical_error("spacing and eta must be positive");
    const double k = (eta / spacing) * (eta / spacing);
    Matrix h(n);
    if (stencil == HamiltonianStencil::central_squared) {
        for (std::size_t i = 0; i < n; ++i) h(i, i) = 0.5 * k + v[i];
        h(0, 0) = 0.25 * k + v[0];
        h(n - 1, n - 1) = 0.25 * k + v[n - 1];
        for (std::size_t i = 0; i + 2 < n; ++i) {
            h(i, i + 2) = -0.25 * k;
            h(i + 2, i) = -0.25 * k;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) h(i, i) = 2.0 * k + v[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h(i, i + 1) = -k;
            h(i + 1, i) = -k;
        }
    }
    return SymmetricMatrix(std::move(h));
}

// ---------------------------------------------------------------------------
// Symmetric eigensolver (cyclic Jacobi)

class eigen_convergence_error : public numerical_error {
public:
    eigen_convergence_error(double residual, int sweeps)
        : numerical_error("Jacobi iteration did not converge after " + std::to_string(sweeps) +
                          " sweeps (off-diagonal norm " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector of values[k]; empty if not requested
    int sweeps = 0;

    std::vector<double> vector(std::size_t k) const {
        std::vector<double> v(vectors.rows());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = vectors(i, k);
        return v;
    }
};

struct JacobiOptions {
    double relative_tolerance = 1e-12;  // off-diagonal Frobenius norm / ‖M‖_F
    int max_sweeps = 100;
};

inline EigenDecomposition symmetric_eigen(const SymmetricMatrix& m, bool want_vectors,
                                          JacobiOptions opts = {}) {
    const std::size_t n = m.size();
    Matrix a = m.matrix();
    Matrix vt;  // rows are the accumulated rotation columns
    if (want_vectors) vt = Matrix::identity(n);

    const double fro = a.frobenius_norm();
    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    int sweep = 0;
    double off = off_norm();
    while (off > opts.relative_tolerance * fro) {
        if (sweep >= opts.max_sweeps) throw eigen_convergence_error(off, sweep);
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p);
                const double aqq = a(q, q);
                if (sweep > 4 && std::abs(app) + 100.0 * std::abs(apq) == std::abs(app) &&
                    std::abs(aqq) + 100.0 * std::abs(apq) == std::abs(aqq)) {
                    a(p, q) = a(q, p) = 0.0;
                    continue;
                }
                const double theta = (aqq - app) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 0.5 / theta;
                else
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = a(q, p) = 0.0;
                auto rp = a.row(p);
                auto rq = a.row(q);
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = rp[r];
                    const double arq = rq[r];
                    const double np = arp - s * (arq + tau * arp);
                    const double nq = arq + s * (arp - tau * arq);
                    rp[r] = np;
                    rq[r] = nq;
                    a(r, p) = np;
                    a(r, q) = nq;
                }
                if (want_vectors) {
                    auto vp = vt.row(p);
                    auto vq = vt.row(q);
                    for (std::size_t r = 0; r < n; ++r) {
                        const double xp = vp[r];
                        const double xq = vq[r];
                        vp[r] = xp - s * (xq + tau * xp);
                        vq[r] = xq + s * (xp - tau * xq);
                    }
                }
            }
        }
        off = off_norm();
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.sweeps = sweep;
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
    if (want_vectors) {
        out.vectors = Matrix(n);
        for (std::size_t k = 0; k < n; ++k) {
            auto src = vt.row(order[k]);
            for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = src[i];
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symmetric tridiagonal matrices

struct SymmetricTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // off[i] couples i and i+1

    std::size_t size() const noexcept { return diag.size(); }

    /// Number of eigenvalues strictly below x (Sturm count from LDLᵀ pivots).
    std::size_t count_below(double x) const {
        const std::size_t n = diag.size();
        std::size_t count = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double b2 = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
            d = diag[i] - x - (i == 0 ? 0.0 : b2 / d);
            if (d == 0.0) d = -std::numeric_limits<double>::min();
            if (d < 0.0) ++count;
        }
        return count;
    }

    std::pair<double, double> gershgorin() const {
        const std::size_t n = diag.size();
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            if (i > 0) r += std::abs(off[i - 1]);
            if (i + 1 < n) r += std::abs(off[i]);
            lo = std::min(lo, diag[i] - r);
            hi = std::max(hi, diag[i] + r);
        }
        return {lo, hi};
    }
};

/// Three-point Schrödinger operator -η² ψ'' + V ψ with Dirichlet truncation.
inline SymmetricTridiagonal schrodinger_tridiagonal(std::span<const double> v, double spacing,
                                                    double eta = 1.0) {
    if (v.size() < 3) throw numerical_error("grid too small");
    const double k = (eta / spacing) * (eta / spacing);
    SymmetricTridiagonal t;
    t.diag.resize(v.size());
    t.off.assign(v.size() - 1, -k);
    for (std::size_t i = 0; i < v.size(); ++i) t.diag[i] = 2.0 * k + v[i];
    return t;
}

/// k-th smallest eigenvalue (0-based) by Sturm bisection.
inline double tridiagonal_eigenvalue(const SymmetricTridiagonal& t, std::size_t k) {
    if (k >= t.size()) throw numerical_error("eigenvalue index out of range");
    auto [lo, hi] = t.gershgorin();
    const double scale = std::max(std::abs(lo), std::abs(hi));
    lo -= 1e-12 * scale + std::numeric_limits<double>::min();
    hi += 1e-12 * scale + std::numeric_limits<double>::min();
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (t.count_below(mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> tridiagonal_eigenvalues(const SymmetricTridiagonal& t, std::size_t count) {
    count = std::min(count, t.size());
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) out[k] = tridiagonal_eigenvalue(t, k);
    return out;
}

namespace detail {
/// Solves (T - shift I) x = b in place by LU with partial pivoting.
inline void tridiagonal_shifted_solve(const SymmetricTridiagonal& t, double shift,
                                      std::vector<double>& b) {
    const std::size_t n = t.size();
    std::vector<double> dl(t.off), d(n), du(t.off), du2(n > 2 ? n - 2 : 0, 0.0);
    std::vector<bool> swapped(n, false);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    const double tiny = std::numeric_limits<double>::epsilon() *
                        std::max(1.0, std::abs(t.gershgorin().second) + std::abs(shift));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = tiny;
            const double fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            const double fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            const double temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (swapped[i]) std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n >= 2) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
}

inline void normalize_euclidean(std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    if (!(s > 0.0) || !std::isfinite(s)) throw numerical_error("inverse iteration breakdown");
    for (double& v : x) v /= s;
}
}  // namespace detail

/// Unit eigenvector for an (accurately known) eigenvalue, by inverse iteration.
/// Sign convention: the largest-magnitude component is positive.
inline std::vector<double> tridiagonal_eigenvector(const SymmetricTridiagonal& t, double eigenvalue) {
    const std::size_t n = t.size();
    std::vector<double> x(n);
    // Deterministic start vector with no special symmetry.
    for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
    for (int it = 0; it < 4; ++it) {
        detail::tridiagonal_shifted_solve(t, eigenvalue, x);
        detail::normalize_euclidean(x);
    }
    const auto big = std::max_element(x.begin(), x.end(),
                                      [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (*big < 0.0)
        for (double& v : x) v = -v;
    return x;
}

struct EigenPair {
    double energy = 0.0;
    std::vector<double> vector;  // unit Euclidean norm
};

inline EigenPair tridiagonal_eigenpair(const SymmetricTridiagonal& t, std::size_t k) {
    EigenPair p;
    p.energy = tridiagonal_eigenvalue(t, k);
    p.vector = tridiagonal_eigenvector(t, p.energy);
    return p;
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form
/// (eigenvalues only; the orthogonal factor is not accumulated).
inline SymmetricTridiagonal householder_tridiagonalize(const SymmetricMatrix& m) {
    const std::size_t n = m.size();
    Matrix a = m.matrix();
    SymmetricTridiagonal t;
    t.diag.resize(n);
    t.off.resize(n > 0 ? n - 1 : 0);
    std::vector<double> v(n), p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        // Reflect a(k+1.., k) onto a multiple of e_{k+1}. The column is scaled
        // by its largest entry so tiny couplings do not underflow when squared.
        double colmax = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) colmax = std::max(colmax, std::abs(a(i, k)));
        if (colmax == 0.0) {
            t.off[k] = 0.0;
            continue;
        }
        double alpha2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) alpha2 += (a(i, k) / colmax) * (a(i, k) / colmax);
        double alpha = std::sqrt(alpha2);  // in units of colmax
        if (a(k + 1, k) > 0.0) alpha = -alpha;
        for (std::size_t i = 0; i <= k; ++i) v[i] = 0.0;
        v[k + 1] = a(k + 1, k) / colmax - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k) / colmax;
        alpha *= colmax;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) {
            t.off[k] = a(k + 1, k);
            continue;
        }
        const double beta = 2.0 / vnorm2;
        // p = beta A v on the trailing block
        for (std::size_t i = k + 1; i < n; ++i) {
            auto ai = a.row(i);
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += ai[j] * v[j];
            p[i] = beta * s;
        }
        double vp = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vp += v[i] * p[i];
        const double kfac = 0.5 * beta * vp;
        for (std::size_t i = k + 1; i < n; ++i) p[i] -= kfac * v[i];  // w
        for (std::size_t i = k + 1; i < n; ++i) {
            auto ai = a.row(i);
            for (std::size_t j = k + 1; j < n; ++j) ai[j] -= v[i] * p[j] + p[i] * v[j];
        }
        t.off[k] = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = a(k, i) = 0.0;
        a(k + 1, k) = a(k, k + 1) = alpha;
    }
    for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i);
    if (n >= 2) t.off[n - 2] = a(n - 1, n - 2);
    return t;
}

/// Smallest eigenvalue via Householder reduction and Sturm bisection.
inline double lowest_eigenvalue(const SymmetricMatrix& m) {
    if (m.size() == 0) throw numerical_error("empty matrix");
    if (m.size() == 1) return m(0, 0);
    return tridiagonal_eigenvalue(householder_tridiagonalize(m), 0);
}

// ---------------------------------------------------------------------------
// Cholesky factorisation and the partner map

class not_positive_definite : public numerical_error {
public:
    not_positive_definite(std::size_t index, double pivot)
        : numerical_error("not positive definite (pivot " + std::to_string(pivot) + " at index " +
                          std::to_string(index) + ")"),
          index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Row-by-row (Cholesky-Banachiewicz) factorisation m = L Lᵀ.
inline LowerTriangular cholesky_decompose(const SymmetricMatrix& m) {
    const std::size_t n = m.size();
    Matrix l(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto li = l.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            auto lj = l.row(j);
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            if (i == j) {
                if (!(s > 0.0)) throw not_positive_definite(i, s);
                li[i] = std::sqrt(s);
            } else {
                li[j] = s / lj[j];
            }
        }
    }
    return LowerTriangular(std::move(l));
}

inline constexpr double default_partner_tolerance = 1e-10;

/// Supersymmetric partner of a real symmetric matrix: shift so the lowest
/// eigenvalue becomes `tol`, factor as L Lᵀ, return Lᵀ L with the shift undone.
/// Lᵀ plays the role of the annihilation operator A.
inline SymmetricMatrix susy_partner_matrix(const SymmetricMatrix& h1,
                                           double tol = default_partner_tolerance) {
    if (!(tol > 0.0)) throw numerical_error("partner tolerance must be positive");
    const double shift = lowest_eigenvalue(h1) - tol;
    LowerTriangular l = [&] {
        try {
            return cholesky_decompose(h1.shifted(-shift));
        } catch (const not_positive_definite& e) {
            throw numerical_error(std::string("shift insufficient (increase tol): ") + e.what());
        }
    }();
    return l.transpose_times().shifted(shift);
}

// ---------------------------------------------------------------------------
// Random symmetric matrices

enum class Distribution { uniform, normal };

inline Distribution parse_distribution(const std::string& s) {
    if (s == "uniform") return Distribution::uniform;
    if (s == "normal") return Distribution::normal;
    throw numerical_error("unknown distribution: " + s);
}

inline const char* to_string(Distribution d) {
    return d == Distribution::uniform ? "uniform" : "normal";
}

/// Distribution parameter putting ≈95% of the mass in [-scale, scale]:
/// uniform half-width scale/0.95, normal standard deviation scale/z with z the
/// two-sided 95% normal quantile.
inline constexpr double normal_quantile_975 = 1.959963984540054;

inline double entry_parameter(Distribution dist, double scale) {
    return dist == Distribution::uniform ? scale / 0.95 : scale / normal_quantile_975;
}

inline double draw(Rng& rng, Distribution dist, double parameter) {
    return dist == Distribution::uniform ? rng.uniform(-parameter, parameter)
                                         : rng.normal(0.0, parameter);
}

/// Entrywise i.i.d. draws (row-major, all n² entries) then lower → upper copy.
inline SymmetricMatrix random_symmetric(std::size_t n, Distribution dist, double scale, RngSeed seed) {
    if (n < 1) throw numerical_error("matrix size must be positive");
    Rng rng(seed);
    const double param = entry_parameter(dist, scale);
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = draw(rng, dist, param);
    return SymmetricMatrix::from_lower(std::move(a));
}

/// Haar-distributed orthogonal matrix: Gram-Schmidt on a Gaussian matrix,
/// which fixes the triangular factor's diagonal to be positive.
inline Matrix haar_orthogonal(std::size_t n, Rng& rng) {
    Matrix g(n);  // rows are the vectors being orthonormalised (columns of Q)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(j, i) = rng.normal();
    for (std::size_t k = 0; k < n; ++k) {
        auto gk = g.row(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < k; ++j) {
                auto gj = g.row(j);
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += gj[i] * gk[i];
                for (std::size_t i = 0; i < n; ++i) gk[i] -= dot * gj[i];
            }
        }
        double norm = 0.0;
        for (double x : gk) norm += x * x;
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) throw numerical_error("degenerate Gaussian sample");
        for (double& x : gk) x /= norm;
    }
    return g.transposed();
}

struct SpectralSample {
    SymmetricMatrix matrix;
    std::vector<double> spectrum;  // diagonal of D, in draw order
    Matrix orthogonal;             // Q
};

/// A = Q D Qᵀ with D i.i.d. and Q Haar. The D parameter is √n times the
/// entrywise parameter, so the entries of A keep roughly the requested spread.
inline SpectralSample sample_spectral(std::size_t n, Distribution dist, double scale, RngSeed seed) {
    if (n < 1) throw numerical_error("matrix size must be positive");
    Rng rng(seed);
    const double param = std::sqrt(static_cast<double>(n)) * entry_parameter(dist, scale);
    std::vector<double> d(n);
    for (double& x : d) x = draw(rng, dist, param);
    Matrix q = haar_orthogonal(n, rng);
    // (Q D) Qᵀ, lower triangle only
    Matrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto qi = q.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            auto qj = q.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += qi[k] * d[k] * qj[k];
            a(i, j) = s;
        }
    }
    return {SymmetricMatrix::from_lower(std::move(a)), std::move(d), std::move(q)};
}

inline SymmetricMatrix random_symmetric_spectral(std::size_t n, Distribution dist, double scale,
                                                 RngSeed seed) {
    return sample_spectral(n, dist, scale, seed).matrix;
}

// ---------------------------------------------------------------------------
// Block supersymmetric system

struct SupersymmetricSystem {
    SymmetricMatrix h1;  // input
    SymmetricMatrix h2;  // partner, same shift restored
    double shift = 0.0;  // h1 - shift*I = A†A
    Matrix a_factor;     // A = Lᵀ
    Matrix hamiltonian;  // diag(A†A, AA†), assembled as {Q, Q†}
    Matrix q;            // [[0, 0], [A, 0]]
    Matrix q_dagger;     // [[0, A†], [0, 0]]
};

inline SupersymmetricSystem build_supersymmetric_system(const SymmetricMatrix& h1,
                                                        double tol = default_partner_tolerance) {
    if (!(tol > 0.0)) throw numerical_error("partner tolerance must be positive");
    const std::size_t n = h1.size();
    const double shift = lowest_eigenvalue(h1) - tol;
    LowerTriangular l = [&] {
        try {
            return cholesky_decompose(h1.shifted(-shift));
        } catch (const not_positive_definite& e) {
            throw numerical_error(std::string("shift insufficient (increase tol): ") + e.what());
        }
    }();
    SupersymmetricSystem s;
    s.h1 = h1;
    s.h2 = l.transpose_times().shifted(shift);
    s.shift = shift;
    s.a_factor = l.matrix().transposed();
    s.q = Matrix(2 * n);
    s.q_dagger = Matrix(2 * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            s.q(n + i, j) = s.a_factor(i, j);
            s.q_dagger(j, n + i) = s.a_factor(i, j);
        }
    s.hamiltonian = s.q * s.q_dagger + s.q_dagger * s.q;
    return s;
}

// ---------------------------------------------------------------------------
// Matrix CSV: first line n, then n rows of n comma-separated values.

inline void write_matrix_csv(std::ostream& os, const Matrix& m) {
    if (!m.square()) throw numerical_error("matrix CSV requires a square matrix");
    os << m.rows() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) os << ',';
            detail::write_number(os, m(i, j));
        }
        os << '\n';
    }
}

inline Matrix read_matrix_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw numerical_error("empty matrix CSV");
    std::size_t n = 0;
    try {
        n = static_cast<std::size_t>(std::stoul(line));
    } catch (const std::exception&) {
        throw numerical_error("matrix CSV header must be the size n");
    }
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::getline(is, line)) throw numerical_error("matrix CSV truncated");
        std::stringstream ss(line);
        std::string cell;
        std::size_t j = 0;
        while (std::getline(ss, cell, ',')) {
            if (j >= n) throw numerical_error("matrix CSV row too long");
            m(i, j++) = std::stod(cell);
        }
        if (j != n) throw numerical_error("matrix CSV row too short");
    }
    return m;
}

}  // namespace susyqm
