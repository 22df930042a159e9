#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lanczos {

/// Uniform grid of interior points on (a, b) with Dirichlet boundaries.
///
/// The boundary nodes are excluded: a Dirichlet problem forces the solution
/// to zero there, so every vector and matrix in the artifact has dimension
/// n (the number of interior points) and h = (b - a) / (n + 1).
class Grid1D {
public:
    Grid1D(double a, double b, std::size_t n) : a_(a), b_(b), n_(n) {
        if (!(b > a))
            throw std::domain_error("Grid1D: right endpoint must exceed left endpoint (b > a)");
        if (n < 3)
            throw std::domain_error("Grid1D: need at least 3 interior points (n >= 3), got " +
                                    std::to_string(n));
        h_ = (b - a) / static_cast<double>(n + 1);
        points_.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            points_[k] = a + static_cast<double>(k + 1) * h_;
    }

    double a() const { return a_; }
    double b() const { return b_; }
    std::size_t n() const { return n_; }
    double spacing() const { return h_; }
    double point(std::size_t k) const { return points_[k]; }
    const std::vector<double>& points() const { return points_; }

    bool same_as(const Grid1D& other) const {
        return a_ == other.a_ && b_ == other.b_ && n_ == other.n_;
    }

private:
    double a_;
    double b_;
    std::size_t n_;
    double h_;
    std::vector<double> points_;
};

inline Grid1D make_grid(double a, double b, std::size_t n) { return Grid1D(a, b, n); }

/// Quadrature weights over the interior points of a Grid1D.
struct QuadratureWeights {
    Grid1D grid;
    std::vector<double> w;
};

/// Trapezoid rule restricted to interior points. The boundary values of a
/// Dirichlet problem vanish, so the usual h/2 end corrections drop out and
/// every interior weight is h.
inline QuadratureWeights trapezoid_weights(const Grid1D& grid) {
    return QuadratureWeights{grid, std::vector<double>(grid.n(), grid.spacing())};
}

/// Quadrature of grid samples: sum_k w[k] * f[k].
inline double integrate(const QuadratureWeights& weights, const std::vector<double>& samples) {
    if (samples.size() != weights.w.size())
        throw std::invalid_argument("integrate: sample count does not match weight count");
    double acc = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k)
        acc += weights.w[k] * samples[k];
    return acc;
}

} // namespace lanczos
