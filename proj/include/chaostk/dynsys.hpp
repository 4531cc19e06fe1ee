#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "chaostk/time_series.hpp"

namespace chaostk {

using Vec3 = std::array<double, 3>;

enum class SystemKind { Lorenz, Rossler };

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

struct RosslerParams {
    double a = 0.25;
    double b = 2.0;
    double c = 4.0;
};

struct SystemParams {
    SystemKind system = SystemKind::Lorenz;
    LorenzParams lorenz;
    RosslerParams rossler;

    static SystemParams make_lorenz(double rho, double sigma = 10.0, double beta = 8.0 / 3.0) {
        SystemParams p;
        p.system = SystemKind::Lorenz;
        p.lorenz = {sigma, rho, beta};
        return p;
    }
    static SystemParams make_rossler(double a, double b = 2.0, double c = 4.0) {
        SystemParams p;
        p.system = SystemKind::Rossler;
        p.rossler = {a, b, c};
        return p;
    }

    /// Integration step the protocol uses for this system.
    double default_dt() const { return system == SystemKind::Lorenz ? 0.001 : 0.01; }
};

struct StateTrajectory {
    std::vector<Vec3> states;
    double dt = 1.0;
    double t0 = 0.0;

    double duration() const { return states.empty() ? 0.0 : dt * static_cast<double>(states.size() - 1); }
};

inline Vec3 vector_field(const SystemParams& params, const Vec3& s) {
    const double x = s[0], y = s[1], z = s[2];
    if (params.system == SystemKind::Lorenz) {
        const auto& p = params.lorenz;
        return {p.sigma * (y - x), x * (p.rho - z) - y, x * y - p.beta * z};
    }
    const auto& p = params.rossler;
    return {-y - z, x + p.a * y, p.b + z * (x - p.c)};
}

namespace detail {

inline Vec3 axpy(const Vec3& a, double h, const Vec3& b) {
    return {a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]};
}

} // namespace detail

/// Classical fixed-step RK4. Throws on blow-up (any |component| > 1e8).
template <typename Field>
StateTrajectory integrate_rk4_field(Field&& f, const Vec3& x0, double dt, double t_end) {
    if (dt <= 0.0) throw std::invalid_argument("integrate_rk4: dt must be positive");
    if (t_end < dt) throw std::invalid_argument("integrate_rk4: t_end must be at least dt");

    const auto n_steps = static_cast<std::size_t>(std::floor(t_end / dt));
    StateTrajectory traj;
    traj.dt = dt;
    traj.states.reserve(n_steps + 1);
    traj.states.push_back(x0);

    Vec3 x = x0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const Vec3 k1 = f(x);
        const Vec3 k2 = f(detail::axpy(x, dt / 2.0, k1));
        const Vec3 k3 = f(detail::axpy(x, dt / 2.0, k2));
        const Vec3 k4 = f(detail::axpy(x, dt, k3));
        for (int d = 0; d < 3; ++d)
            x[d] += dt / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        for (int d = 0; d < 3; ++d)
            if (!std::isfinite(x[d]) || std::abs(x[d]) > 1e8)
                throw std::runtime_error("integrate_rk4: trajectory blow-up");
        traj.states.push_back(x);
    }
    return traj;
}

inline StateTrajectory integrate_rk4(const SystemParams& params, const Vec3& x0, double dt, double t_end) {
    return integrate_rk4_field([&params](const Vec3& s) { return vector_field(params, s); }, x0, dt, t_end);
}

/// Removes all samples with t < t_cut and re-bases t0 to zero.
inline StateTrajectory drop_transient(const StateTrajectory& traj, double t_cut) {
    if (t_cut <= 0.0) return traj;
    const auto first = static_cast<std::size_t>(std::ceil(t_cut / traj.dt - 1e-12));
    if (first >= traj.states.size())
        throw std::invalid_argument("drop_transient: cut-off removes the entire trajectory");
    StateTrajectory out;
    out.dt = traj.dt;
    out.t0 = 0.0;
    out.states.assign(traj.states.begin() + static_cast<std::ptrdiff_t>(first), traj.states.end());
    return out;
}

/// Scalar observable: one coordinate of the trajectory.
inline TimeSeries observe(const StateTrajectory& traj, int component = 0) {
    if (component < 0 || component > 2)
        throw std::out_of_range("observe: component index must be 0, 1, or 2");
    TimeSeries ts;
    ts.dt = traj.dt;
    ts.t0 = traj.t0;
    ts.samples.reserve(traj.states.size());
    for (const auto& s : traj.states) ts.samples.push_back(s[static_cast<std::size_t>(component)]);
    return ts;
}

} // namespace chaostk
