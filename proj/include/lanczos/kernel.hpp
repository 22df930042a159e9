#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "schrodinger.hpp"

namespace lanczos {

enum class KernelOrigin { discrete_inverse, analytic };

inline const char* to_string(KernelOrigin origin) {
    return origin == KernelOrigin::discrete_inverse ? "discrete-inverse" : "analytic";
}

/// Sampled kernel K(x_i, x_j) of the inhomogeneous boundary-value problem.
///
/// Quadrature action: (K u)(x_i) = sum_j K[i][j] * w[j] * u[j]. A
/// discrete-inverse kernel makes that action the exact inverse of the
/// discrete Hamiltonian; an analytic kernel samples the closed-form free
/// Green's function.
struct Kernel {
    Grid1D grid;
    QuadratureWeights weights;
    SymmetricMatrix k;
    KernelOrigin origin;
};

namespace detail {

inline void require_uniform_weights(const QuadratureWeights& weights, const char* who) {
    for (double w : weights.w)
        if (w != weights.w.front())
            throw std::invalid_argument(std::string(who) +
                                        ": kernel symmetry requires uniform quadrature weights");
}

struct TridiagonalFactors {
    std::vector<double> pivot; // D in the LDL^T factorization
    std::vector<double> lower; // unit subdiagonal of L
};

// LDL^T factorization of the symmetric tridiagonal matrix with the given
// diagonal and subdiagonal. Assumes positive definiteness was checked.
inline TridiagonalFactors factor_tridiagonal(const std::vector<double>& diag,
                                             const std::vector<double>& sub) {
    const std::size_t n = diag.size();
    TridiagonalFactors f;
    f.pivot.resize(n);
    f.lower.assign(n, 0.0);
    f.pivot[0] = diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        f.lower[i] = sub[i - 1] / f.pivot[i - 1];
        f.pivot[i] = diag[i] - f.lower[i] * sub[i - 1];
    }
    return f;
}

inline void solve_tridiagonal(const TridiagonalFactors& f, const std::vector<double>& sub,
                              std::vector<double>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1; i < n; ++i) x[i] -= f.lower[i] * x[i - 1];
    for (std::size_t i = 0; i < n; ++i) x[i] /= f.pivot[i];
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= f.lower[i + 1] * x[i + 1];
    (void)sub;
}

// Sturm-sequence count of eigenvalues of the tridiagonal matrix at or
// below `shift`.
inline std::size_t eigenvalues_not_above(const std::vector<double>& diag,
                                         const std::vector<double>& sub, double shift) {
    const std::size_t n = diag.size();
    std::size_t count = 0;
    double q = diag[0] - shift;
    if (q <= 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = (q == 0.0) ? 1e-300 : q;
        q = (diag[i] - shift) - sub[i - 1] * sub[i - 1] / denom;
        if (q <= 0.0) ++count;
    }
    return count;
}

} // namespace detail

/// Discrete kernel K = H^{-1} * diag(1/w): the unique matrix whose
/// quadrature action inverts the discrete Hamiltonian exactly. Requires a
/// positive-definite H (guaranteed for V >= 0); near-singular Hamiltonians
/// are rejected.
inline Kernel kernel_from_inverse(const Hamiltonian& hamiltonian,
                                  const QuadratureWeights& weights) {
    if (!hamiltonian.grid.same_as(weights.grid))
        throw std::invalid_argument("kernel_from_inverse: Hamiltonian and weights use different grids");
    detail::require_uniform_weights(weights, "kernel_from_inverse");

    const std::size_t n = hamiltonian.grid.n();
    std::vector<double> diag(n), sub(n > 1 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = hamiltonian.matrix(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) sub[i] = hamiltonian.matrix(i, i + 1);

    const double scale = hamiltonian.matrix.matrix().max_abs();
    if (detail::eigenvalues_not_above(diag, sub, 1e-12 * scale) > 0)
        throw numerical_error(
            "kernel_from_inverse: Hamiltonian is singular or not positive definite "
            "(an eigenvalue lies at or below 1e-12 * ||H||)");

    const auto factors = detail::factor_tridiagonal(diag, sub);
    SymmetricMatrix k(n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        detail::solve_tridiagonal(factors, sub, col);
        const double inv_w = 1.0 / weights.w[j];
        for (std::size_t i = 0; i <= j; ++i) k.set(i, j, col[i] * inv_w);
    }
    return Kernel{hamiltonian.grid, weights, std::move(k), KernelOrigin::discrete_inverse};
}

/// Closed-form Green's function of -d^2/dx^2 on (a, b) with Dirichlet
/// ends, sampled at the grid points:
///   K(x, y) = (min(x,y) - a) * (b - max(x,y)) / (b - a).
inline Kernel kernel_analytic_free(const Grid1D& grid, const QuadratureWeights& weights) {
    if (!grid.same_as(weights.grid))
        throw std::invalid_argument("kernel_analytic_free: grid and weights differ");
    detail::require_uniform_weights(weights, "kernel_analytic_free");

    const std::size_t n = grid.n();
    const double a = grid.a();
    const double b = grid.b();
    const double span = b - a;
    SymmetricMatrix k(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            k.set(i, j, (grid.point(i) - a) * (b - grid.point(j)) / span);
    return Kernel{grid, weights, std::move(k), KernelOrigin::analytic};
}

/// Quadrature action of the kernel on grid samples u:
///   (K u)[i] = sum_j K[i][j] * w[j] * u[j].
inline std::vector<double> apply_kernel(const Kernel& kernel, const std::vector<double>& u) {
    const std::size_t n = kernel.grid.n();
    if (u.size() != n) throw std::invalid_argument("apply_kernel: sample length mismatch");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += kernel.k(i, j) * kernel.weights.w[j] * u[j];
        out[i] = acc;
    }
    return out;
}

/// Max elementwise residual of the defining inverse identity
/// (H * K) * diag(w) = I. Zero up to solver tolerance for
/// discrete-inverse kernels.
inline double kernel_inverse_residual(const Hamiltonian& hamiltonian, const Kernel& kernel) {
    if (!hamiltonian.grid.same_as(kernel.grid))
        throw std::invalid_argument("kernel_inverse_residual: grid mismatch");
    const std::size_t n = kernel.grid.n();
    const RealMatrix product = hamiltonian.matrix.matrix() * kernel.k.matrix();
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double expected = (i == j) ? 1.0 : 0.0;
            residual = std::max(residual, std::abs(product(i, j) * kernel.weights.w[j] - expected));
        }
    return residual;
}

/// Eigenpairs of the symmetrized Nystrom matrix diag(sqrt w) K diag(sqrt w),
/// keeping the LARGEST k eigenvalues (they correspond to the lowest
/// energies). Values are returned ascending; eigenvectors are mapped back
/// to grid functions by dividing componentwise by sqrt(w), which leaves
/// them unit-normalized in the quadrature norm.
inline RealSpectrum kernel_spectrum(const Kernel& kernel, std::size_t k, double tol = 1e-12,
                                    int max_sweeps = 100) {
    const std::size_t n = kernel.grid.n();
    if (k == 0 || k > n)
        throw std::invalid_argument("kernel_spectrum: need 1 <= k <= n, got k = " +
                                    std::to_string(k));

    std::vector<double> sqrt_w(n);
    for (std::size_t i = 0; i < n; ++i) sqrt_w[i] = std::sqrt(kernel.weights.w[i]);

    SymmetricMatrix nystrom(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) nystrom.set(i, j, sqrt_w[i] * kernel.k(i, j) * sqrt_w[j]);

    const RealSpectrum full = jacobi_eigen(nystrom, tol, max_sweeps);

    RealSpectrum top;
    top.values.assign(full.values.end() - static_cast<std::ptrdiff_t>(k), full.values.end());
    top.vectors = RealMatrix(n, k);
    for (std::size_t col = 0; col < k; ++col) {
        const std::size_t src = n - k + col;
        for (std::size_t i = 0; i < n; ++i)
            top.vectors(i, col) = full.vectors(i, src) / sqrt_w[i];
    }
    return top;
}

struct ReciprocityPair {
    double energy;
    double mu;
    double product;
};

/// Pairs (E_k, mu_k, E_k * mu_k) ordered by ascending energy, with the
/// maximum deviation of the products from one.
struct ReciprocityReport {
    std::vector<ReciprocityPair> pairs;
    double max_abs_deviation = 0.0;
};

/// Pairs the lowest k energies of H with the largest k kernel eigenvalues
/// and measures |E_k * mu_k - 1|. For a discrete-inverse kernel the
/// pairing is exact up to solver tolerance.
inline ReciprocityReport certify_reciprocity(const Hamiltonian& hamiltonian, const Kernel& kernel,
                                             std::size_t k, double tol = 1e-12,
                                             int max_sweeps = 100) {
    if (!hamiltonian.grid.same_as(kernel.grid))
        throw std::invalid_argument("certify_reciprocity: Hamiltonian and kernel use different grids");

    const RealSpectrum energies = solve_spectrum(hamiltonian, k, tol, max_sweeps);
    const RealSpectrum mus = kernel_spectrum(kernel, k, tol, max_sweeps);

    ReciprocityReport report;
    report.pairs.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double e = energies.values[j];
        const double mu = mus.values[k - 1 - j]; // largest mu pairs with lowest E
        const double product = e * mu;
        report.pairs.push_back({e, mu, product});
        report.max_abs_deviation = std::max(report.max_abs_deviation, std::abs(product - 1.0));
    }
    return report;
}

} // namespace lanczos
