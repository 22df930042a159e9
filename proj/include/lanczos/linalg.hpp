#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lanczos {

using cplx = std::complex<double>;

/// Dense row-major matrix. Rectangular shapes appear only as truncated
/// eigenvector blocks; everything else in the artifact is square.
template <class T>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o, "matrix addition");
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] + o.data_[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        require_same_shape(o, "matrix subtraction");
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("matrix product: inner dimensions differ (" +
                                        std::to_string(cols_) + " vs " + std::to_string(o.rows_) + ")");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            const T* ai = &data_[i * cols_];
            T* ri = &r.data_[i * o.cols_];
            for (std::size_t k = 0; k < cols_; ++k) {
                const T aik = ai[k];
                if (aik == T{}) continue;
                const T* bk = &o.data_[k * o.cols_];
                for (std::size_t j = 0; j < o.cols_; ++j) ri[j] += aik * bk[j];
            }
        }
        return r;
    }

    Matrix scaled(T factor) const {
        Matrix r(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = factor * data_[i];
        return r;
    }

    std::vector<T> apply(const std::vector<T>& x) const {
        if (x.size() != cols_)
            throw std::invalid_argument("matrix apply: vector length does not match column count");
        std::vector<T> y(rows_, T{});
        for (std::size_t i = 0; i < rows_; ++i) {
            const T* ai = &data_[i * cols_];
            T acc{};
            for (std::size_t j = 0; j < cols_; ++j) acc += ai[j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    double max_abs() const {
        double m = 0.0;
        for (const T& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double frobenius_norm() const {
        double acc = 0.0;
        for (const T& v : data_) acc += std::norm(cplx(v));
        return std::sqrt(acc);
    }

private:
    void require_same_shape(const Matrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument(std::string(what) + ": shapes differ");
    }

    std::size_t rows_;
    std::size_t cols_;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

inline RealMatrix transpose(const RealMatrix& m) {
    RealMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
    return r;
}

inline ComplexMatrix adjoint(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols(), m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

inline ComplexMatrix to_complex(const RealMatrix& m) {
    ComplexMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = cplx(m(i, j), 0.0);
    return r;
}

/// Real symmetric matrix; symmetry holds exactly as stored.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t dim) : m_(dim, dim) {}

    explicit SymmetricMatrix(RealMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw std::invalid_argument("SymmetricMatrix: matrix is not square");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = i + 1; j < m_.cols(); ++j)
                if (m_(i, j) != m_(j, i))
                    throw std::invalid_argument("SymmetricMatrix: entry (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") is not mirrored exactly");
    }

    static SymmetricMatrix identity_scaled(std::size_t dim, double value) {
        SymmetricMatrix s(dim);
        for (std::size_t i = 0; i < dim; ++i) s.set(i, i, value);
        return s;
    }

    std::size_t dim() const { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Sets both (i, j) and (j, i).
    void set(std::size_t i, std::size_t j, double value) {
        m_(i, j) = value;
        m_(j, i) = value;
    }

    const RealMatrix& matrix() const { return m_; }

private:
    RealMatrix m_;
};

/// Complex Hermitian matrix; conjugate symmetry holds exactly as stored.
class HermitianMatrix {
public:
    explicit HermitianMatrix(std::size_t dim) : m_(dim, dim) {}

    explicit HermitianMatrix(ComplexMatrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw std::invalid_argument("HermitianMatrix: matrix is not square");
        for (std::size_t i = 0; i < m_.rows(); ++i)
            for (std::size_t j = i; j < m_.cols(); ++j)
                if (m_(i, j) != std::conj(m_(j, i)))
                    throw std::invalid_argument("HermitianMatrix: entry (" + std::to_string(i) + "," +
                                                std::to_string(j) + ") is not the conjugate of its mirror");
    }

    static HermitianMatrix from_real(const SymmetricMatrix& s) {
        HermitianMatrix h(s.dim());
        for (std::size_t i = 0; i < s.dim(); ++i)
            for (std::size_t j = i; j < s.dim(); ++j) h.set(i, j, cplx(s(i, j), 0.0));
        return h;
    }

    /// Accepts a matrix that is Hermitian only up to rounding (e.g. the
    /// product U^dagger O U), verifies the asymmetry is within `tol`, and
    /// stores the exactly hermitized half-sum.
    static HermitianMatrix from_near_hermitian(const ComplexMatrix& m, double tol,
                                               const std::string& context) {
        if (m.rows() != m.cols())
            throw std::invalid_argument(context + ": matrix is not square");
        double asym = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = i; j < m.cols(); ++j)
                asym = std::max(asym, std::abs(m(i, j) - std::conj(m(j, i))));
        if (asym > tol)
            throw numerical_error(context + ": Hermiticity violated by " + std::to_string(asym));
        HermitianMatrix h(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            h.set(i, i, cplx(m(i, i).real(), 0.0));
            for (std::size_t j = i + 1; j < m.cols(); ++j)
                h.set(i, j, 0.5 * (m(i, j) + std::conj(m(j, i))));
        }
        return h;
    }

    std::size_t dim() const { return m_.rows(); }
    cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Sets (i, j) to value and (j, i) to its conjugate. The diagonal is
    /// forced real.
    void set(std::size_t i, std::size_t j, cplx value) {
        if (i == j) value = cplx(value.real(), 0.0);
        m_(i, j) = value;
        m_(j, i) = std::conj(value);
    }

    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

/// Eigendecomposition result: `values` ascending, columns of `vectors` are
/// the matching orthonormal eigenvectors. The first component of magnitude
/// above 1e-8 in each eigenvector is real and positive.
template <class T>
struct Spectrum {
    std::vector<double> values;
    Matrix<T> vectors;

    std::vector<T> eigenvector(std::size_t k) const {
        std::vector<T> v(vectors.rows());
        for (std::size_t i = 0; i < vectors.rows(); ++i) v[i] = vectors(i, k);
        return v;
    }
};

using RealSpectrum = Spectrum<double>;
using ComplexSpectrum = Spectrum<cplx>;

namespace detail {

constexpr double kSignConventionFloor = 1e-8;

inline void fix_column_sign(RealMatrix& vectors, std::size_t k) {
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        const double v = vectors(i, k);
        if (std::abs(v) > kSignConventionFloor) {
            if (v < 0.0)
                for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, k) = -vectors(r, k);
            return;
        }
    }
}

inline void fix_column_sign(ComplexMatrix& vectors, std::size_t k) {
    for (std::size_t i = 0; i < vectors.rows(); ++i) {
        const cplx v = vectors(i, k);
        const double mag = std::abs(v);
        if (mag > kSignConventionFloor) {
            const cplx factor = std::conj(v) / mag;
            for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, k) *= factor;
            return;
        }
    }
}

inline std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return idx;
}

inline double off_diagonal_frobenius(const std::vector<double>& a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = &a[i * n];
        for (std::size_t j = i + 1; j < n; ++j) acc += row[j] * row[j];
    }
    return std::sqrt(2.0 * acc);
}

inline double off_diagonal_frobenius(const std::vector<cplx>& a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx* row = &a[i * n];
        for (std::size_t j = i + 1; j < n; ++j) acc += std::norm(row[j]);
    }
    return std::sqrt(2.0 * acc);
}

// Stable rotation parameters: tan(2*angle) = 2*apq / (aqq - app), with the
// smaller-magnitude tangent root so |t| <= 1.
inline void rotation_parameters(double app, double aqq, double apq_mag, double& t, double& c,
                                double& s, double& tau) {
    const double theta = (aqq - app) / (2.0 * apq_mag);
    if (std::abs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta);
    } else {
        t = ((theta >= 0.0) ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    c = 1.0 / std::sqrt(t * t + 1.0);
    s = t * c;
    tau = s / (1.0 + c);
}

} // namespace detail

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// Sweeps row pairs (p, q) in lexicographic order, skipping pivots already
/// below tol * ||A||_F / n (the skipped mass alone cannot push the
/// off-diagonal Frobenius norm above the stopping bound). Convergence is
/// declared when off(A)_F <= tol * ||A||_F.
inline RealSpectrum jacobi_eigen(const SymmetricMatrix& A, double tol = 1e-12,
                                 int max_sweeps = 100) {
    if (tol <= 0.0) throw std::invalid_argument("jacobi_eigen: tolerance must be positive");
    const std::size_t n = A.dim();
    std::vector<double> a = A.matrix().data();
    std::vector<double> w(n * n, 0.0); // rows of w accumulate the transposed eigenvector matrix
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = 1.0;

    double norm_f = 0.0;
    for (double v : a) norm_f += v * v;
    norm_f = std::sqrt(norm_f);

    if (norm_f > 0.0) {
        const double stop = tol * norm_f;
        const double skip = stop / static_cast<double>(n);
        int sweep = 0;
        while (detail::off_diagonal_frobenius(a, n) > stop) {
            if (++sweep > max_sweeps)
                throw numerical_error("jacobi_eigen: no convergence after " +
                                      std::to_string(max_sweeps) + " sweeps");
            for (std::size_t p = 0; p + 1 < n; ++p) {
                double* rp = &a[p * n];
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = rp[q];
                    if (std::abs(apq) <= skip) continue;
                    double* rq = &a[q * n];

                    double t, c, s, tau;
                    detail::rotation_parameters(rp[p], rq[q], apq, t, c, s, tau);

                    rp[p] -= t * apq;
                    rq[q] += t * apq;
                    rp[q] = 0.0;
                    rq[p] = 0.0;

                    auto rotate_span = [&](std::size_t lo, std::size_t hi) {
                        for (std::size_t j = lo; j < hi; ++j) {
                            const double g = rp[j];
                            const double h = rq[j];
                            const double gp = g - s * (h + g * tau);
                            const double hq = h + s * (g - h * tau);
                            rp[j] = gp;
                            rq[j] = hq;
                            a[j * n + p] = gp;
                            a[j * n + q] = hq;
                        }
                    };
                    rotate_span(0, p);
                    rotate_span(p + 1, q);
                    rotate_span(q + 1, n);

                    double* wp = &w[p * n];
                    double* wq = &w[q * n];
                    for (std::size_t j = 0; j < n; ++j) {
                        const double g = wp[j];
                        const double h = wq[j];
                        wp[j] = g - s * (h + g * tau);
                        wq[j] = h + s * (g - h * tau);
                    }
                }
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i];
    const auto order = detail::ascending_order(diag);

    RealSpectrum result;
    result.values.resize(n);
    result.vectors = RealMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = diag[order[k]];
        const double* wrow = &w[order[k] * n];
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) = wrow[i];
        detail::fix_column_sign(result.vectors, k);
    }
    return result;
}

/// Cyclic Jacobi eigensolver for complex Hermitian matrices. The pivot
/// phase is absorbed into the rotation, so angles follow the real formulas
/// applied to |a_pq|.
inline ComplexSpectrum hermitian_eigen(const HermitianMatrix& A, double tol = 1e-12,
                                       int max_sweeps = 100) {
    if (tol <= 0.0) throw std::invalid_argument("hermitian_eigen: tolerance must be positive");
    const std::size_t n = A.dim();
    std::vector<cplx> a = A.matrix().data();
    std::vector<cplx> w(n * n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) w[i * n + i] = cplx(1.0, 0.0);

    double norm_f = 0.0;
    for (const cplx& v : a) norm_f += std::norm(v);
    norm_f = std::sqrt(norm_f);

    if (norm_f > 0.0) {
        const double stop = tol * norm_f;
        const double skip = stop / static_cast<double>(n);
        int sweep = 0;
        while (detail::off_diagonal_frobenius(a, n) > stop) {
            if (++sweep > max_sweeps)
                throw numerical_error("hermitian_eigen: no convergence after " +
                                      std::to_string(max_sweeps) + " sweeps");
            for (std::size_t p = 0; p + 1 < n; ++p) {
                cplx* rp = &a[p * n];
                for (std::size_t q = p + 1; q < n; ++q) {
                    const cplx apq = rp[q];
                    const double mag = std::abs(apq);
                    if (mag <= skip) continue;
                    cplx* rq = &a[q * n];

                    double t, c, s, tau;
                    (void)tau;
                    detail::rotation_parameters(rp[p].real(), rq[q].real(), mag, t, c, s, tau);
                    const cplx phase = apq / mag;           // e^{i arg(a_pq)}
                    const cplx sp = s * phase;              // s * e^{+i phi}
                    const cplx sm = s * std::conj(phase);   // s * e^{-i phi}

                    rp[p] = cplx(rp[p].real() - t * mag, 0.0);
                    rq[q] = cplx(rq[q].real() + t * mag, 0.0);
                    rp[q] = cplx(0.0, 0.0);
                    rq[p] = cplx(0.0, 0.0);

                    auto rotate_span = [&](std::size_t lo, std::size_t hi) {
                        for (std::size_t j = lo; j < hi; ++j) {
                            const cplx g = rp[j];
                            const cplx h = rq[j];
                            const cplx gp = c * g - sp * h;
                            const cplx hq = sm * g + c * h;
                            rp[j] = gp;
                            rq[j] = hq;
                            a[j * n + p] = std::conj(gp);
                            a[j * n + q] = std::conj(hq);
                        }
                    };
                    rotate_span(0, p);
                    rotate_span(p + 1, q);
                    rotate_span(q + 1, n);

                    cplx* wp = &w[p * n];
                    cplx* wq = &w[q * n];
                    for (std::size_t j = 0; j < n; ++j) {
                        const cplx g = wp[j];
                        const cplx h = wq[j];
                        wp[j] = c * g - sm * h;
                        wq[j] = sp * g + c * h;
                    }
                }
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a[i * n + i].real();
    const auto order = detail::ascending_order(diag);

    ComplexSpectrum result;
    result.values.resize(n);
    result.vectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        result.values[k] = diag[order[k]];
        const cplx* wrow = &w[order[k] * n];
        for (std::size_t i = 0; i < n; ++i) result.vectors(i, k) = wrow[i];
        detail::fix_column_sign(result.vectors, k);
    }
    return result;
}

/// V * diag(exp(scale * lambda_k)) * V^T from an existing eigendecomposition.
inline ComplexMatrix spectral_exp_from(const RealSpectrum& spect, cplx scale) {
    const std::size_t n = spect.values.size();
    std::vector<cplx> phases(n);
    for (std::size_t k = 0; k < n; ++k) phases[k] = std::exp(scale * spect.values[k]);
    ComplexMatrix u(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx coef = phases[k] * spect.vectors(i, k);
            if (coef == cplx{}) continue;
            cplx* row = &u.data()[i * n];
            for (std::size_t j = 0; j < n; ++j) row[j] += coef * spect.vectors(j, k);
        }
    }
    return u;
}

/// Spectral matrix exponential of a real symmetric matrix. Purely
/// imaginary `scale` yields a unitary.
inline ComplexMatrix spectral_exp(const SymmetricMatrix& H, cplx scale, double tol = 1e-12,
                                  int max_sweeps = 100) {
    return spectral_exp_from(jacobi_eigen(H, tol, max_sweeps), scale);
}

/// AB - BA. Anti-Hermitian for Hermitian inputs.
inline ComplexMatrix commutator(const ComplexMatrix& A, const ComplexMatrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.rows() != A.cols())
        throw std::invalid_argument("commutator: operands must be square with equal dimensions");
    return A * B - B * A;
}

inline ComplexMatrix commutator(const HermitianMatrix& A, const HermitianMatrix& B) {
    return commutator(A.matrix(), B.matrix());
}

} // namespace lanczos
