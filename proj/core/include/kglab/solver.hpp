#pragma once

#include "kglab/field.hpp"
#include "kglab/functionals.hpp"
#include "kglab/nonlinearity.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace kglab {

struct SolverConfig {
    double dt_init = 2e-3;
    double dt_min = 1e-9;
    double dt_max = 2e-3;
    double t_end = 1.0;

    double blowup_amp_threshold = 1e6;   // u_max trigger
    double blowup_norm_factor = 1e6;     // G > factor * G(0) trigger
    std::size_t sample_every = 10;       // diagnostics cadence in accepted steps
    double safety = 0.8;                 // step controller safety factor
    bool dealias = false;                // 2/3-rule padded nonlinear evaluation

    // Finite-propagation bookkeeping for compactly supported data: the torus
    // represents R^n exactly for t < effective_period/2 - support_radius.
    // support_radius = 0 disables the check (periodic or non-compact data).
    double support_radius = 0.0;
    double effective_period = 0.0;       // 0 -> grid period L

    void validate() const;
};

enum class Outcome {
    reached_horizon,               // integrated to t_end
    blowup_detected,               // amplitude/norm runaway or non-finite values
    step_underflow,                // controller pinned at dt_min without progress
    propagation_horizon_exceeded,  // left the window where the torus is exact
};

const char* to_string(Outcome o);

struct TrajectoryResult {
    std::vector<DiagnosticsRecord> records;
    Outcome outcome = Outcome::reached_horizon;
    double t_final = 0.0;
    double t_detect = 0.0;         // threshold crossing time (blowup only)
    double t_detect_bracket_lo = 0.0; // previous sample time, brackets t_detect
    std::size_t steps = 0;
    double final_dt = 0.0;
    double wall_time_s = 0.0;
    State final_state;             // state at t_final (post-detection for blowup)
};

/// Exact linear Klein-Gordon flow for duration dt: per mode,
/// u_hat -> u_hat cos(w dt) + v_hat sin(w dt)/w with w = sqrt(1 + |k|^2).
/// Energy-conserving for the linear equation to roundoff.
State linear_propagate(const State& state, double dt);

/// v <- v + dt f(u) pointwise; u and t unchanged.
State nonlinear_kick(const State& state, const NonlinearityModel& model, double dt,
                     bool dealias = false);

/// Strang composition: half linear flow, full kick, half linear flow.
State strang_step(const State& state, const NonlinearityModel& model, double dt,
                  bool dealias = false);

/// Integrate to config.t_end with adaptive steps
/// dt = clamp(safety / sqrt(1 + max|f'(u)|), dt_min, dt_max),
/// emitting diagnostics every sample_every accepted steps and at the end.
TrajectoryResult run(const State& state0, const NonlinearityModel& model,
                     const SolverConfig& config);

/// Summary block written next to the diagnostics CSV.
std::string run_summary(const TrajectoryResult& r);

}  // namespace kglab
