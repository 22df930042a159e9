#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "linalg.hpp"
#include "schrodinger.hpp"

namespace lanczos {

/// Wave function samples on the interior grid points, unit-normalized in
/// the quadrature norm: sum_k w[k] |psi[k]|^2 = 1.
struct StateVector {
    Grid1D grid;
    std::vector<cplx> psi;
};

inline double quadrature_norm(const QuadratureWeights& weights, const std::vector<cplx>& psi) {
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i) acc += weights.w[i] * std::norm(psi[i]);
    return std::sqrt(acc);
}

inline StateVector normalized_state(const Grid1D& grid, const QuadratureWeights& weights,
                                    std::vector<cplx> raw) {
    if (raw.size() != grid.n())
        throw std::invalid_argument("normalized_state: sample count does not match grid");
    const double norm = quadrature_norm(weights, raw);
    if (!(norm > 0.0))
        throw std::invalid_argument("normalized_state: cannot normalize the zero vector");
    for (cplx& v : raw) v /= norm;
    return StateVector{grid, std::move(raw)};
}

inline StateVector state_from_real_samples(const Grid1D& grid, const QuadratureWeights& weights,
                                           const std::vector<double>& raw) {
    std::vector<cplx> z(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) z[i] = cplx(raw[i], 0.0);
    return normalized_state(grid, weights, std::move(z));
}

/// A labeled Hermitian operator on grid functions.
struct Observable {
    std::string label;
    HermitianMatrix matrix;
};

/// Position operator: diagonal multiplication by x_i.
inline Observable position_observable(const Grid1D& grid) {
    HermitianMatrix m(grid.n());
    for (std::size_t i = 0; i < grid.n(); ++i) m.set(i, i, cplx(grid.point(i), 0.0));
    return Observable{"position", std::move(m)};
}

/// Momentum operator -i d/dx with the central-difference antisymmetric
/// stencil; Hermitian by construction.
inline Observable momentum_observable(const Grid1D& grid) {
    const double coeff = 1.0 / (2.0 * grid.spacing());
    HermitianMatrix m(grid.n());
    for (std::size_t i = 0; i + 1 < grid.n(); ++i) m.set(i, i + 1, cplx(0.0, -coeff));
    return Observable{"momentum", std::move(m)};
}

inline Observable hamiltonian_observable(const Hamiltonian& hamiltonian) {
    return Observable{"energy", HermitianMatrix::from_real(hamiltonian.matrix)};
}

namespace detail {

inline void require_normalized(const QuadratureWeights& weights, const StateVector& state,
                               const char* who) {
    const double norm = quadrature_norm(weights, state.psi);
    if (std::abs(norm - 1.0) > 1e-10)
        throw std::invalid_argument(std::string(who) + ": state is not quadrature-normalized");
}

// <psi| M |psi> in the quadrature inner product, for a raw complex matrix.
inline cplx raw_expectation(const ComplexMatrix& m, const std::vector<cplx>& psi,
                            const QuadratureWeights& weights) {
    const std::vector<cplx> mpsi = m.apply(psi);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < psi.size(); ++i)
        acc += weights.w[i] * std::conj(psi[i]) * mpsi[i];
    return acc;
}

inline double raw_expectation_scale(const ComplexMatrix& m, const std::vector<cplx>& psi,
                                    const QuadratureWeights& weights) {
    const std::vector<cplx> mpsi = m.apply(psi);
    double acc = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        acc += weights.w[i] * std::abs(psi[i]) * std::abs(mpsi[i]);
    return acc;
}

} // namespace detail

/// psi(t) = exp(-i H t) psi0 via the spectral decomposition; exact up to
/// eigensolver tolerance, norm preserving.
inline StateVector schrodinger_evolve_from(const RealSpectrum& spect, const StateVector& psi0,
                                           double t) {
    const std::size_t n = psi0.psi.size();
    if (spect.values.size() != n)
        throw std::invalid_argument("schrodinger_evolve: spectrum dimension mismatch");
    // coefficients in the eigenbasis, phase-advanced, mapped back
    std::vector<cplx> coeff(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) acc += spect.vectors(i, k) * psi0.psi[i];
        coeff[k] = acc * std::exp(cplx(0.0, -spect.values[k] * t));
    }
    std::vector<cplx> out(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const cplx ck = coeff[k];
        if (ck == cplx{}) continue;
        for (std::size_t i = 0; i < n; ++i) out[i] += spect.vectors(i, k) * ck;
    }
    return StateVector{psi0.grid, std::move(out)};
}

inline StateVector schrodinger_evolve(const Hamiltonian& hamiltonian, const StateVector& psi0,
                                      double t, double tol = 1e-12, int max_sweeps = 100) {
    if (hamiltonian.grid.n() != psi0.psi.size())
        throw std::invalid_argument("schrodinger_evolve: state dimension does not match Hamiltonian");
    return schrodinger_evolve_from(jacobi_eigen(hamiltonian.matrix, tol, max_sweeps), psi0, t);
}

/// O_H(t) = exp(+i H t) O exp(-i H t). With the wave equation written as
/// i dpsi/dt = H psi, this operator satisfies dO_H/dt = i [H, O_H].
inline Observable heisenberg_evolve_from(const RealSpectrum& spect, const Observable& o,
                                         double t) {
    const ComplexMatrix u_minus = spectral_exp_from(spect, cplx(0.0, -t));
    const ComplexMatrix u_plus = adjoint(u_minus);
    const ComplexMatrix sandwich = u_plus * (o.matrix.matrix() * u_minus);
    const double tol = 1e-10 * std::max(1.0, o.matrix.matrix().max_abs());
    return Observable{o.label,
                      HermitianMatrix::from_near_hermitian(sandwich, tol, "heisenberg_evolve")};
}

inline Observable heisenberg_evolve(const Hamiltonian& hamiltonian, const Observable& o, double t,
                                    double tol = 1e-12, int max_sweeps = 100) {
    if (hamiltonian.grid.n() != o.matrix.dim())
        throw std::invalid_argument("heisenberg_evolve: observable dimension does not match Hamiltonian");
    return heisenberg_evolve_from(jacobi_eigen(hamiltonian.matrix, tol, max_sweeps), o, t);
}

/// Quadrature expectation value <psi| O |psi>. The imaginary part of the
/// accumulated value must vanish for a Hermitian observable; it is checked
/// against 1e-10 relative to the accumulation scale.
inline double expectation(const Observable& o, const StateVector& psi,
                          const QuadratureWeights& weights) {
    if (o.matrix.dim() != psi.psi.size())
        throw std::invalid_argument("expectation: observable dimension does not match state");
    detail::require_normalized(weights, psi, "expectation");
    const cplx value = detail::raw_expectation(o.matrix.matrix(), psi.psi, weights);
    const double scale = std::max(1.0, detail::raw_expectation_scale(o.matrix.matrix(), psi.psi, weights));
    if (std::abs(value.imag()) > 1e-10 * scale)
        throw numerical_error("expectation: imaginary part " + std::to_string(value.imag()) +
                              " exceeds tolerance for observable '" + o.label + "'");
    return value.real();
}

/// Max over `times` of the difference between the Schrodinger-picture and
/// Heisenberg-picture expectation values of O. Both pictures are computed
/// from one eigendecomposition but along independent routes (state
/// evolution vs operator sandwich).
inline double verify_picture_equivalence(const Hamiltonian& hamiltonian, const Observable& o,
                                         const StateVector& psi0, const QuadratureWeights& weights,
                                         const std::vector<double>& times, double tol = 1e-12,
                                         int max_sweeps = 100) {
    detail::require_normalized(weights, psi0, "verify_picture_equivalence");
    const RealSpectrum spect = jacobi_eigen(hamiltonian.matrix, tol, max_sweeps);
    double max_dev = 0.0;
    for (double t : times) {
        const StateVector psi_t = schrodinger_evolve_from(spect, psi0, t);
        const double schrodinger_side =
            detail::raw_expectation(o.matrix.matrix(), psi_t.psi, weights).real();

        const Observable o_t = heisenberg_evolve_from(spect, o, t);
        const double heisenberg_side =
            detail::raw_expectation(o_t.matrix.matrix(), psi0.psi, weights).real();

        max_dev = std::max(max_dev, std::abs(schrodinger_side - heisenberg_side));
    }
    return max_dev;
}

/// Max-norm deviation of the central difference
///   (O_H(t+dt) - O_H(t-dt)) / (2 dt)
/// from the commutator form i [H, O_H(t)]. Second-order accurate in dt.
inline double verify_heisenberg_derivative(const Hamiltonian& hamiltonian, const Observable& o,
                                           double t, double dt, double tol = 1e-12,
                                           int max_sweeps = 100) {
    if (!(dt > 0.0)) throw std::invalid_argument("verify_heisenberg_derivative: dt must be positive");
    const RealSpectrum spect = jacobi_eigen(hamiltonian.matrix, tol, max_sweeps);

    const ComplexMatrix plus = heisenberg_evolve_from(spect, o, t + dt).matrix.matrix();
    const ComplexMatrix minus = heisenberg_evolve_from(spect, o, t - dt).matrix.matrix();
    const ComplexMatrix center = heisenberg_evolve_from(spect, o, t).matrix.matrix();

    const ComplexMatrix difference = (plus - minus).scaled(cplx(1.0 / (2.0 * dt), 0.0));
    const ComplexMatrix rate =
        commutator(to_complex(hamiltonian.matrix.matrix()), center).scaled(cplx(0.0, 1.0));
    return (difference - rate).max_abs();
}

} // namespace lanczos
