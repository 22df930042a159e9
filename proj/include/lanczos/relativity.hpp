#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "errors.hpp"

namespace lanczos {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>; // indices 0..2 spatial, 3 = time coordinate x4

inline double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

inline double dot3(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

/// Static spherically symmetric metric in quasi-Cartesian coordinates
/// (x, y, z, x4), assembled from the radial profiles
///   g_44 = g44(r)   (negative),
///   g_ij = delta_ij + (grr(r) - 1) n_i n_j,  n = x / r.
/// Analytic radial derivatives are part of the type; r_min is the validity
/// floor below which no component may be evaluated.
struct StaticMetric {
    std::string label;
    double mass = 0.0;
    double r_min = 0.0;
    std::function<double(double)> g44;
    std::function<double(double)> grr;
    std::function<double(double)> dg44_dr;
    std::function<double(double)> dgrr_dr;

    static StaticMetric schwarzschild(double mass, double margin = 0.5) {
        if (!(mass > 0.0)) throw std::domain_error("schwarzschild: mass must be positive");
        if (!(margin > 0.0)) throw std::domain_error("schwarzschild: margin must be positive");
        StaticMetric m;
        m.label = "schwarzschild";
        m.mass = mass;
        m.r_min = 2.0 * mass * (1.0 + margin);
        m.g44 = [mass](double r) { return -(1.0 - 2.0 * mass / r); };
        m.grr = [mass](double r) { return 1.0 / (1.0 - 2.0 * mass / r); };
        m.dg44_dr = [mass](double r) { return -2.0 * mass / (r * r); };
        m.dgrr_dr = [mass](double r) {
            const double f = 1.0 - 2.0 * mass / r;
            return -(2.0 * mass / (r * r)) / (f * f);
        };
        return m;
    }

    static StaticMetric flat() {
        StaticMetric m;
        m.label = "flat";
        m.mass = 0.0;
        m.r_min = 0.0;
        m.g44 = [](double) { return -1.0; };
        m.grr = [](double) { return 1.0; };
        m.dg44_dr = [](double) { return 0.0; };
        m.dgrr_dr = [](double) { return 0.0; };
        return m;
    }
};

/// Full Christoffel table of the metric at one point, in the Cartesian
/// coordinate basis; index 3 is the time coordinate x4.
struct Christoffel {
    double radius = 0.0;
    std::array<std::array<std::array<double, 4>, 4>, 4> components{};

    double gamma(std::size_t upper, std::size_t lower1, std::size_t lower2) const {
        return components[upper][lower1][lower2];
    }
};

namespace detail {

inline void require_above_floor(const StaticMetric& metric, double r, const char* who) {
    if (!(r > metric.r_min))
        throw std::domain_error(std::string(who) + ": radius " + std::to_string(r) +
                                " is at or below the metric validity floor r_min = " +
                                std::to_string(metric.r_min));
}

struct MetricPoint {
    double r;
    Vec3 n;        // radial unit vector
    double a;      // g44
    double da;     // d g44 / dr
    double g;      // grr
    double b;      // grr - 1
    double db;     // d grr / dr
};

inline MetricPoint metric_point(const StaticMetric& metric, const Vec3& x, const char* who) {
    const double r = norm3(x);
    require_above_floor(metric, r, who);
    MetricPoint p;
    p.r = r;
    p.n = {x[0] / r, x[1] / r, x[2] / r};
    p.a = metric.g44(r);
    p.da = metric.dg44_dr(r);
    p.g = metric.grr(r);
    p.b = p.g - 1.0;
    p.db = metric.dgrr_dr(r);
    return p;
}

// Closed-form Christoffel components of the quasi-Cartesian metric:
//   Gamma^i_44   = -(A'/2G) n_i
//   Gamma^4_4j   =  (A'/2A) n_j
//   Gamma^i_jk   =  (n_i/2G) [B' n_j n_k + (2B/r)(delta_jk - n_j n_k)]
// with A = g44, G = grr, B = G - 1; all other components vanish.
inline Christoffel christoffel_from_point(const MetricPoint& p) {
    Christoffel c;
    c.radius = p.r;
    const double radial_44 = -p.da / (2.0 * p.g);
    const double time_mix = p.da / (2.0 * p.a);
    for (std::size_t i = 0; i < 3; ++i) {
        c.components[i][3][3] = radial_44 * p.n[i];
        c.components[3][3][i] = time_mix * p.n[i];
        c.components[3][i][3] = time_mix * p.n[i];
        for (std::size_t j = 0; j < 3; ++j)
            for (std::size_t k = 0; k < 3; ++k) {
                const double djk = (j == k) ? 1.0 : 0.0;
                c.components[i][j][k] =
                    (p.n[i] / (2.0 * p.g)) *
                    (p.db * p.n[j] * p.n[k] + (2.0 * p.b / p.r) * (djk - p.n[j] * p.n[k]));
            }
    }
    return c;
}

} // namespace detail

/// Christoffel table at radius r, evaluated at the reference point
/// (r, 0, 0). A flat metric yields the zero table.
inline Christoffel christoffel(const StaticMetric& metric, double r) {
    detail::require_above_floor(metric, r, "christoffel");
    return detail::christoffel_from_point(detail::metric_point(metric, Vec3{r, 0.0, 0.0}, "christoffel"));
}

/// Right-hand side of the static-condition motion law:
///   d^2 xi^i / dx4^2 = -Gamma^i_44(xi),
/// evaluated from the external metric. The particle's mass does not enter.
inline Vec3 lanczos_static_rhs(const StaticMetric& metric, const Vec3& xi) {
    const auto p = detail::metric_point(metric, xi, "lanczos_static_rhs");
    const double coeff = p.da / (2.0 * p.g); // = -Gamma^radial_44
    return Vec3{coeff * p.n[0], coeff * p.n[1], coeff * p.n[2]};
}

enum class MotionLaw { lanczos_static, full_geodesic };

inline const char* to_string(MotionLaw law) {
    return law == MotionLaw::lanczos_static ? "lanczos-static" : "full-geodesic";
}

struct TrajectorySample {
    double x4;
    Vec3 xi;
    Vec3 dxi_dx4;
};

/// Time series of particle coordinates against coordinate time x4.
/// mass_tag is carried as metadata only; the lanczos-static law never
/// reads it.
struct Trajectory {
    MotionLaw law;
    std::vector<TrajectorySample> samples;
    double mass_tag = 0.0;
};

/// Fixed-step RK4 integration of the static-condition law. The initial
/// velocity must vanish unless allow_nonstatic is set.
inline Trajectory integrate_lanczos(const StaticMetric& metric, const Vec3& xi0, const Vec3& v0,
                                    double x4_end, std::size_t steps, double mass_tag,
                                    bool allow_nonstatic = false) {
    if (steps < 10) throw std::invalid_argument("integrate_lanczos: need steps >= 10");
    if (!(x4_end > 0.0)) throw std::invalid_argument("integrate_lanczos: x4_end must be positive");
    if (!allow_nonstatic && (v0[0] != 0.0 || v0[1] != 0.0 || v0[2] != 0.0))
        throw std::invalid_argument(
            "integrate_lanczos: nonzero initial velocity requires the allow-nonstatic flag "
            "(the static-condition law is derived for a particle initially at rest)");
    detail::require_above_floor(metric, norm3(xi0), "integrate_lanczos");

    const double dt = x4_end / static_cast<double>(steps);
    Trajectory traj{MotionLaw::lanczos_static, {}, mass_tag};
    traj.samples.reserve(steps + 1);

    Vec3 xi = xi0;
    Vec3 v = v0;
    traj.samples.push_back({0.0, xi, v});

    auto acceleration = [&](const Vec3& pos, std::size_t step) -> Vec3 {
        const double r = norm3(pos);
        if (!(r > metric.r_min))
            throw numerical_error("integrate_lanczos: trajectory crossed r_min = " +
                                  std::to_string(metric.r_min) + " at step " + std::to_string(step) +
                                  " (r = " + std::to_string(r) + ")");
        return lanczos_static_rhs(metric, pos);
    };

    for (std::size_t step = 0; step < steps; ++step) {
        const Vec3 k1x = v;
        const Vec3 k1v = acceleration(xi, step);

        Vec3 xm{xi[0] + 0.5 * dt * k1x[0], xi[1] + 0.5 * dt * k1x[1], xi[2] + 0.5 * dt * k1x[2]};
        Vec3 vm{v[0] + 0.5 * dt * k1v[0], v[1] + 0.5 * dt * k1v[1], v[2] + 0.5 * dt * k1v[2]};
        const Vec3 k2x = vm;
        const Vec3 k2v = acceleration(xm, step);

        xm = {xi[0] + 0.5 * dt * k2x[0], xi[1] + 0.5 * dt * k2x[1], xi[2] + 0.5 * dt * k2x[2]};
        vm = {v[0] + 0.5 * dt * k2v[0], v[1] + 0.5 * dt * k2v[1], v[2] + 0.5 * dt * k2v[2]};
        const Vec3 k3x = vm;
        const Vec3 k3v = acceleration(xm, step);

        xm = {xi[0] + dt * k3x[0], xi[1] + dt * k3x[1], xi[2] + dt * k3x[2]};
        vm = {v[0] + dt * k3v[0], v[1] + dt * k3v[1], v[2] + dt * k3v[2]};
        const Vec3 k4x = vm;
        const Vec3 k4v = acceleration(xm, step);

        for (std::size_t c = 0; c < 3; ++c) {
            xi[c] += (dt / 6.0) * (k1x[c] + 2.0 * k2x[c] + 2.0 * k3x[c] + k4x[c]);
            v[c] += (dt / 6.0) * (k1v[c] + 2.0 * k2v[c] + 2.0 * k3v[c] + k4v[c]);
        }
        const double r = norm3(xi);
        if (!(r > metric.r_min))
            throw numerical_error("integrate_lanczos: trajectory crossed r_min = " +
                                  std::to_string(metric.r_min) + " at step " +
                                  std::to_string(step + 1) + " (r = " + std::to_string(r) + ")");
        traj.samples.push_back({static_cast<double>(step + 1) * dt, xi, v});
    }
    return traj;
}

/// g_{mu nu} u^mu u^nu at the given position.
inline double metric_norm(const StaticMetric& metric, const Vec3& x, const Vec4& u) {
    const auto p = detail::metric_point(metric, x, "metric_norm");
    const Vec3 us{u[0], u[1], u[2]};
    const double radial = dot3(p.n, us);
    return dot3(us, us) + p.b * radial * radial + p.a * u[3] * u[3];
}

/// Four-velocity of a particle at rest: u = (0, 0, 0, 1/sqrt(-g44)).
inline Vec4 rest_four_velocity(const StaticMetric& metric, const Vec3& x) {
    const auto p = detail::metric_point(metric, x, "rest_four_velocity");
    return Vec4{0.0, 0.0, 0.0, 1.0 / std::sqrt(-p.a)};
}

/// Fixed-step RK4 integration of the geodesic equation
///   d^2 x^mu / dtau^2 = -Gamma^mu_ab (dx^a/dtau)(dx^b/dtau)
/// in proper time. Samples are reparametrized to coordinate time:
/// each records x4 and dxi/dx4 = u^i / u^4. When stop_at_x4 is given,
/// integration ends at the first sample with x4 at or past it.
inline Trajectory integrate_full_geodesic(const StaticMetric& metric, const Vec3& xi0,
                                          const Vec4& u0, double tau_end, std::size_t steps,
                                          std::optional<double> stop_at_x4 = std::nullopt) {
    if (steps < 1) throw std::invalid_argument("integrate_full_geodesic: need steps >= 1");
    if (!(tau_end > 0.0))
        throw std::invalid_argument("integrate_full_geodesic: tau_end must be positive");
    detail::require_above_floor(metric, norm3(xi0), "integrate_full_geodesic");
    const double norm_defect = metric_norm(metric, xi0, u0) + 1.0;
    if (std::abs(norm_defect) > 1e-10)
        throw std::invalid_argument(
            "integrate_full_geodesic: four-velocity is not normalized (g(u,u) + 1 = " +
            std::to_string(norm_defect) + ")");

    struct State {
        Vec3 x;
        double t;
        Vec4 u;
    };

    auto derivative = [&](const State& s, std::size_t step) -> State {
        const double r = norm3(s.x);
        if (!(r > metric.r_min))
            throw numerical_error("integrate_full_geodesic: trajectory crossed r_min = " +
                                  std::to_string(metric.r_min) + " at step " +
                                  std::to_string(step) + " (r = " + std::to_string(r) + ")");
        const auto p = detail::metric_point(metric, s.x, "integrate_full_geodesic");
        const Vec3 us{s.u[0], s.u[1], s.u[2]};
        const double radial = dot3(p.n, us);
        const double spatial_sq = dot3(us, us);

        // Gamma^i_jk u^j u^k collapses onto the radial direction.
        const double spatial_coeff =
            (p.db * radial * radial + (2.0 * p.b / p.r) * (spatial_sq - radial * radial)) /
            (2.0 * p.g);
        const double time_coeff = -p.da / (2.0 * p.g) * s.u[3] * s.u[3];

        State d;
        d.x = us;
        d.t = s.u[3];
        for (std::size_t c = 0; c < 3; ++c)
            d.u[c] = -(time_coeff + spatial_coeff) * p.n[c];
        d.u[3] = -(p.da / p.a) * radial * s.u[3];
        return d;
    };

    const double dtau = tau_end / static_cast<double>(steps);
    Trajectory traj{MotionLaw::full_geodesic, {}, 0.0};
    traj.samples.reserve(steps + 1);

    State s{xi0, 0.0, u0};
    auto record = [&](const State& st) {
        traj.samples.push_back({st.t, st.x,
                                Vec3{st.u[0] / st.u[3], st.u[1] / st.u[3], st.u[2] / st.u[3]}});
    };
    record(s);

    auto advance = [](const State& s0, const State& d, double factor) -> State {
        State r;
        for (std::size_t c = 0; c < 3; ++c) r.x[c] = s0.x[c] + factor * d.x[c];
        r.t = s0.t + factor * d.t;
        for (std::size_t c = 0; c < 4; ++c) r.u[c] = s0.u[c] + factor * d.u[c];
        return r;
    };

    for (std::size_t step = 0; step < steps; ++step) {
        if (stop_at_x4 && s.t >= *stop_at_x4) break;
        const State k1 = derivative(s, step);
        const State k2 = derivative(advance(s, k1, 0.5 * dtau), step);
        const State k3 = derivative(advance(s, k2, 0.5 * dtau), step);
        const State k4 = derivative(advance(s, k3, dtau), step);

        for (std::size_t c = 0; c < 3; ++c)
            s.x[c] += (dtau / 6.0) * (k1.x[c] + 2.0 * k2.x[c] + 2.0 * k3.x[c] + k4.x[c]);
        s.t += (dtau / 6.0) * (k1.t + 2.0 * k2.t + 2.0 * k3.t + k4.t);
        for (std::size_t c = 0; c < 4; ++c)
            s.u[c] += (dtau / 6.0) * (k1.u[c] + 2.0 * k2.u[c] + 2.0 * k3.u[c] + k4.u[c]);

        const double r = norm3(s.x);
        if (!(r > metric.r_min))
            throw numerical_error("integrate_full_geodesic: trajectory crossed r_min = " +
                                  std::to_string(metric.r_min) + " at step " +
                                  std::to_string(step + 1) + " (r = " + std::to_string(r) + ")");
        record(s);
    }
    return traj;
}

/// Divergence between the two motion laws started from rest, sampled on
/// the static-law time grid.
struct DivergenceReport {
    std::vector<std::pair<double, double>> series; // (x4, |xi_lanczos - xi_geodesic|)
    double max_divergence = 0.0;
    std::array<double, 3> thresholds{1e-8, 1e-6, 1e-4};
    std::array<std::optional<double>, 3> first_exceedance{};
};

namespace detail {

inline Vec3 hermite_interpolate(const TrajectorySample& s0, const TrajectorySample& s1,
                                double x4) {
    const double span = s1.x4 - s0.x4;
    const double s = (x4 - s0.x4) / span;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    Vec3 out;
    for (std::size_t c = 0; c < 3; ++c)
        out[c] = h00 * s0.xi[c] + h10 * span * s0.dxi_dx4[c] + h01 * s1.xi[c] +
                 h11 * span * s1.dxi_dx4[c];
    return out;
}

} // namespace detail

/// Runs both integrators from rest at xi0 over [0, horizon] and reports
/// the spatial divergence as a function of x4, plus the first times it
/// exceeds 1e-8, 1e-6 and 1e-4.
inline DivergenceReport compare_motion_laws(const StaticMetric& metric, const Vec3& xi0,
                                            double horizon, std::size_t steps) {
    const Trajectory lanczos_traj =
        integrate_lanczos(metric, xi0, Vec3{0.0, 0.0, 0.0}, horizon, steps, 1.0);

    const Vec4 u0 = rest_four_velocity(metric, xi0);
    // dt/dtau >= u^4(0) along infall, so this tau budget covers [0, horizon].
    const double tau_budget = horizon / u0[3];
    const Trajectory geodesic_traj =
        integrate_full_geodesic(metric, xi0, u0, tau_budget, 2 * steps, horizon);

    DivergenceReport report;
    report.series.reserve(lanczos_traj.samples.size());

    std::size_t seg = 0;
    const auto& g = geodesic_traj.samples;
    for (const auto& sample : lanczos_traj.samples) {
        if (sample.x4 > g.back().x4) break;
        while (seg + 2 < g.size() && g[seg + 1].x4 < sample.x4) ++seg;
        const Vec3 geo = detail::hermite_interpolate(g[seg], g[seg + 1], sample.x4);
        const Vec3 diff{sample.xi[0] - geo[0], sample.xi[1] - geo[1], sample.xi[2] - geo[2]};
        const double div = norm3(diff);
        report.series.emplace_back(sample.x4, div);
        report.max_divergence = std::max(report.max_divergence, div);
        for (std::size_t k = 0; k < report.thresholds.size(); ++k)
            if (!report.first_exceedance[k] && div > report.thresholds[k])
                report.first_exceedance[k] = sample.x4;
    }
    return report;
}

namespace detail {

inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      std::size_t intervals) {
    if (hi <= lo) return 0.0;
    if (intervals % 2 != 0) ++intervals;
    if (intervals < 2) intervals = 2;
    const double h = (hi - lo) / static_cast<double>(intervals);
    double acc = f(lo) + f(hi);
    for (std::size_t i = 1; i < intervals; ++i)
        acc += f(lo + static_cast<double>(i) * h) * ((i % 2 == 0) ? 2.0 : 4.0);
    return acc * h / 3.0;
}

} // namespace detail

/// Newtonian potential of a spherically symmetric density supported on
/// r <= R, from the shell-theorem quadrature
///   phi(r) = -m(r)/r - integral_r^R 4 pi s rho(s) ds,
///   m(r)   =  integral_0^r 4 pi s^2 rho(s) ds,
/// so that phi solves the Poisson equation inside the body and Laplace's
/// equation (point-mass form -M/r) outside, joining continuously at R.
inline std::vector<double> poisson_radial(const std::function<double(double)>& density, double R,
                                          const std::vector<double>& r_samples,
                                          std::size_t quad_intervals = 2000) {
    if (!(R > 0.0)) throw std::domain_error("poisson_radial: body radius must be positive");
    constexpr double kPi = 3.14159265358979323846;

    auto rho_checked = [&](double s) {
        const double value = density(s);
        if (!(value >= 0.0))
            throw std::domain_error("poisson_radial: density is negative at r = " +
                                    std::to_string(s));
        return value;
    };
    auto shell_mass = [&](double s) { return 4.0 * kPi * s * s * rho_checked(s); };
    auto shell_potential = [&](double s) { return 4.0 * kPi * s * rho_checked(s); };

    const double total_mass = detail::simpson(shell_mass, 0.0, R, quad_intervals);

    std::vector<double> phi;
    phi.reserve(r_samples.size());
    for (double r : r_samples) {
        if (r < 0.0) throw std::domain_error("poisson_radial: sample radius must be nonnegative");
        if (r >= R) {
            phi.push_back(-total_mass / r);
        } else if (r == 0.0) {
            phi.push_back(-detail::simpson(shell_potential, 0.0, R, quad_intervals));
        } else {
            const double inner = detail::simpson(shell_mass, 0.0, r, quad_intervals);
            const double tail = detail::simpson(shell_potential, r, R, quad_intervals);
            phi.push_back(-inner / r - tail);
        }
    }
    return phi;
}

/// d phi / dr of the same potential: m(min(r, R)) / r^2.
inline double poisson_radial_derivative(const std::function<double(double)>& density, double R,
                                        double r, std::size_t quad_intervals = 2000) {
    if (!(R > 0.0)) throw std::domain_error("poisson_radial_derivative: body radius must be positive");
    if (!(r > 0.0)) throw std::domain_error("poisson_radial_derivative: need r > 0");
    constexpr double kPi = 3.14159265358979323846;
    auto shell_mass = [&](double s) {
        const double value = density(s);
        if (!(value >= 0.0))
            throw std::domain_error("poisson_radial_derivative: density is negative at r = " +
                                    std::to_string(s));
        return 4.0 * kPi * s * s * value;
    };
    const double enclosed = detail::simpson(shell_mass, 0.0, std::min(r, R), quad_intervals);
    return enclosed / (r * r);
}

} // namespace lanczos
