#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "grid.hpp"
#include "linalg.hpp"

namespace lanczos {

/// Scalar potential V(x) sampled on grid points.
struct Potential {
    std::string label;
    std::function<double(double)> sampler;
};

inline Potential zero_potential() {
    return {"zero", [](double) { return 0.0; }};
}

inline Potential harmonic_potential() {
    return {"harmonic", [](double x) { return x * x; }};
}

inline Potential quartic_potential() {
    return {"quartic", [](double x) { return x * x * x * x; }};
}

struct WellBumpParams {
    double amplitude = 50.0;
    double center = 0.5;
    double width = 0.1;
};

/// Gaussian bump c * exp(-(x - x0)^2 / s^2) inside the well.
inline Potential well_bump_potential(const WellBumpParams& p = {}) {
    if (p.width == 0.0) throw std::domain_error("well-bump potential: width must be nonzero");
    return {"well-bump", [p](double x) {
                const double d = (x - p.center) / p.width;
                return p.amplitude * std::exp(-d * d);
            }};
}

inline Potential potential_by_name(const std::string& name, const WellBumpParams& bump = {}) {
    if (name == "zero") return zero_potential();
    if (name == "harmonic") return harmonic_potential();
    if (name == "quartic") return quartic_potential();
    if (name == "well-bump") return well_bump_potential(bump);
    throw std::domain_error("unknown potential '" + name +
                            "' (known: zero, harmonic, quartic, well-bump)");
}

/// Discrete Hamiltonian -d^2/dx^2 + V on the interior points of a grid,
/// with hbar = 1 and 2m = 1 so the kinetic term is exactly the negative
/// Laplacian. Second-order central differences give the symmetric
/// tridiagonal stencil 2/h^2 + V(x_i) on the diagonal and -1/h^2 off it;
/// Dirichlet boundaries are realized by truncation to interior points.
struct Hamiltonian {
    Grid1D grid;
    std::string potential_label;
    SymmetricMatrix matrix;
};

inline Hamiltonian assemble_hamiltonian(const Grid1D& grid, const Potential& potential) {
    const std::size_t n = grid.n();
    const double h = grid.spacing();
    const double diag_kinetic = 2.0 / (h * h);
    const double off = -1.0 / (h * h);

    SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid.point(i);
        const double v = potential.sampler(x);
        if (!std::isfinite(v))
            throw std::domain_error("assemble_hamiltonian: potential '" + potential.label +
                                    "' is not finite at x = " + std::to_string(x));
        m.set(i, i, diag_kinetic + v);
        if (i + 1 < n) m.set(i, i + 1, off);
    }
    return Hamiltonian{grid, potential.label, std::move(m)};
}

/// Lowest k eigenpairs of the Hamiltonian, values ascending, eigenvectors
/// unit-norm columns under the plain Euclidean inner product.
inline RealSpectrum solve_spectrum(const Hamiltonian& hamiltonian, std::size_t k,
                                   double tol = 1e-12, int max_sweeps = 100) {
    const std::size_t n = hamiltonian.grid.n();
    if (k == 0 || k > n)
        throw std::invalid_argument("solve_spectrum: need 1 <= k <= n, got k = " +
                                    std::to_string(k));
    RealSpectrum full = jacobi_eigen(hamiltonian.matrix, tol, max_sweeps);
    if (k == n) return full;

    RealSpectrum low;
    low.values.assign(full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(k));
    low.vectors = RealMatrix(n, k);
    for (std::size_t col = 0; col < k; ++col)
        for (std::size_t i = 0; i < n; ++i) low.vectors(i, col) = full.vectors(i, col);
    return low;
}

} // namespace lanczos
