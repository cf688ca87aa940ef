#pragma once

// Internal: exact per-mode propagators shared by the undamped and damped
// steppers, and the common integration loop. Not installed.

#include "kglab/solver.hpp"

#include <cmath>
#include <complex>

namespace kglab::detail {

// u'' + w^2 u = 0 advanced by dt; w > 0.
inline void rotate_mode(double w, double dt, std::complex<double>& u, std::complex<double>& v) {
    const double c = std::cos(w * dt);
    const double s = std::sin(w * dt);
    const std::complex<double> u_new = u * c + v * (s / w);
    v = v * c - u * (w * s);
    u = u_new;
}

// u'' + a u' + w^2 u = 0 advanced by dt via the exact 2x2 exponential.
// a == 0 must not reach this function (callers dispatch to rotate_mode so the
// zero-damping limit is bit-identical to the undamped stepper).
inline void damped_mode(double w, double a, double dt, std::complex<double>& u,
                        std::complex<double>& v) {
    const double g = 0.5 * a;
    const double disc = g * g - w * w;
    const std::complex<double> B = v + g * u;  // velocity in the shifted frame
    const double e = std::exp(-g * dt);
    if (disc < 0.0) {  // underdamped
        const double mu = std::sqrt(-disc);
        const double c = std::cos(mu * dt), s = std::sin(mu * dt);
        const std::complex<double> u_new = e * (u * c + B * (s / mu));
        v = e * (v * c - ((g * v + w * w * u) / mu) * s);
        u = u_new;
    } else if (disc > 0.0) {  // overdamped
        const double nu = std::sqrt(disc);
        const double ch = std::cosh(nu * dt), sh = std::sinh(nu * dt);
        const std::complex<double> u_new = e * (u * ch + B * (sh / nu));
        v = e * (v * ch - ((g * v + w * w * u) / nu) * sh);
        u = u_new;
    } else {  // critical
        const std::complex<double> u_new = e * (u + B * dt);
        v = e * (v - (g * v + w * w * u) * dt);
        u = u_new;
    }
}

/// Shared adaptive integration loop; damping_a == 0 gives the undamped flow.
TrajectoryResult run_impl(const State& state0, const NonlinearityModel& model,
                          const SolverConfig& config, double damping_a);

}  // namespace kglab::detail
