#include "kglab/solver.hpp"

#include "kglab/run_config.hpp"
#include "kglab/spectral.hpp"
#include "solver_impl.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace kglab {

void SolverConfig::validate() const {
    if (!(dt_min > 0.0 && dt_min <= dt_init && dt_init <= dt_max))
        throw std::invalid_argument("SolverConfig: need 0 < dt_min <= dt_init <= dt_max");
    if (!(t_end >= 0.0)) throw std::invalid_argument("SolverConfig: t_end must be >= 0");
    if (!(safety > 0.0 && safety <= 1.0))
        throw std::invalid_argument("SolverConfig: safety must be in (0, 1]");
    if (sample_every == 0) throw std::invalid_argument("SolverConfig: sample_every must be >= 1");
    if (!(blowup_amp_threshold > 0.0) || !(blowup_norm_factor > 0.0))
        throw std::invalid_argument("SolverConfig: detection thresholds must be positive");
    if (support_radius < 0.0)
        throw std::invalid_argument("SolverConfig: support_radius must be >= 0");
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::reached_horizon: return "reached_horizon";
        case Outcome::blowup_detected: return "blowup_detected";
        case Outcome::step_underflow: return "step_underflow";
        case Outcome::propagation_horizon_exceeded: return "propagation_horizon_exceeded";
    }
    return "unknown";
}

namespace {

// Thread-local cache for the one-shot public operations.
SpectralWorkspace& cached_ws(const Grid& g) {
    thread_local std::unique_ptr<SpectralWorkspace> ws;
    if (!ws || !(ws->grid() == g)) ws = std::make_unique<SpectralWorkspace>(g);
    return *ws;
}

void rotate_all(std::vector<std::complex<double>>& uh, std::vector<std::complex<double>>& vh,
                const std::vector<double>& omega, double dt, double damping_a) {
    const std::size_t m = uh.size();
    if (damping_a == 0.0) {
        for (std::size_t i = 0; i < m; ++i) detail::rotate_mode(omega[i], dt, uh[i], vh[i]);
    } else {
        for (std::size_t i = 0; i < m; ++i)
            detail::damped_mode(omega[i], damping_a, dt, uh[i], vh[i]);
    }
}

Field kick_term(SpectralWorkspace& ws, const Field& u, const NonlinearityModel& model,
                bool dealias) {
    if (dealias)
        return ws.dealiased_apply(u, [&model](double s) { return eval_f(model, s); });
    Field out(u.grid);
    if (model.kind == NonlinearityModel::Kind::pure_power) {
        const double p = model.p, b = model.b;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            double s = u.values[i];
            out.values[i] = s == 0.0 ? 0.0 : b * std::pow(std::fabs(s), p - 1.0) * s;
        }
    } else {
        for (std::size_t i = 0; i < u.values.size(); ++i) out.values[i] = model.f_custom(u.values[i]);
    }
    return out;
}

}  // namespace

State linear_propagate(const State& state, double dt) {
    SpectralWorkspace& ws = cached_ws(state.u.grid);
    const std::size_t m = ws.spectral_size();
    std::vector<std::complex<double>> uh(m), vh(m);
    ws.to_spectral(state.u.values, uh.data());
    ws.to_spectral(state.v.values, vh.data());

    const std::vector<double>& k2 = ws.k_squared();
    for (std::size_t i = 0; i < m; ++i)
        detail::rotate_mode(std::sqrt(1.0 + k2[i]), dt, uh[i], vh[i]);

    State out = state;
    ws.to_physical(uh, out.u.values.data());
    ws.to_physical(vh, out.v.values.data());
    out.t = state.t + dt;
    return out;
}

State nonlinear_kick(const State& state, const NonlinearityModel& model, double dt, bool dealias) {
    SpectralWorkspace& ws = cached_ws(state.u.grid);
    Field f = kick_term(ws, state.u, model, dealias);
    State out = state;
    for (std::size_t i = 0; i < f.values.size(); ++i) out.v.values[i] += dt * f.values[i];
    return out;
}

State strang_step(const State& state, const NonlinearityModel& model, double dt, bool dealias) {
    State s = linear_propagate(state, 0.5 * dt);
    s = nonlinear_kick(s, model, dt, dealias);
    return linear_propagate(s, 0.5 * dt);
}

namespace detail {

TrajectoryResult run_impl(const State& state0, const NonlinearityModel& model,
                          const SolverConfig& config, double damping_a) {
    config.validate();
    model.validate();
    if (!(state0.u.grid == state0.v.grid))
        throw std::invalid_argument("run: u and v on different grids");

    const auto wall_start = std::chrono::steady_clock::now();
    const Grid& grid = state0.u.grid;
    SpectralWorkspace ws(grid);
    const std::size_t m = ws.spectral_size();

    std::vector<double> omega(m);
    for (std::size_t i = 0; i < m; ++i) omega[i] = std::sqrt(1.0 + ws.k_squared()[i]);

    std::vector<std::complex<double>> uh(m), vh(m);
    ws.to_spectral(state0.u.values, uh.data());
    ws.to_spectral(state0.v.values, vh.data());

    Field u_phys = state0.u;
    Field v_phys = state0.v;
    double t = state0.t;

    TrajectoryResult result;
    result.records.push_back(diagnostics(State(u_phys, v_phys, t), model));
    const double G0 = result.records.front().G;
    const double norm_cap = config.blowup_norm_factor * (G0 > 0.0 ? G0 : 1.0);

    double t_horizon = -1.0;  // < 0: no finite-propagation bookkeeping
    if (config.support_radius > 0.0) {
        const double period = config.effective_period > 0.0 ? config.effective_period : grid.L;
        t_horizon = 0.5 * period - config.support_radius;
        if (!(t_horizon > 0.0))
            throw std::invalid_argument("run: data support leaves no propagation-exact window");
    }

    const double t_end = state0.t + config.t_end;
    double dt = config.dt_init;
    double t_prev_step = t;  // previous accepted step, brackets threshold crossings
    int underflow_streak = 0;
    constexpr int kUnderflowPatience = 50;

    auto sync_v_phys = [&]() { ws.to_physical(vh, v_phys.values.data()); };
    auto push_record = [&]() {
        if (!result.records.empty() && !(t > result.records.back().t)) return;
        sync_v_phys();
        result.records.push_back(diagnostics(State(u_phys, v_phys, t), model));
    };
    auto finish = [&](Outcome o) {
        push_record();
        result.outcome = o;
        result.t_final = t;
        result.final_dt = dt;
        sync_v_phys();
        result.final_state = State(u_phys, v_phys, t);
        result.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    };

    while (true) {
        // Detection on the current accepted state.
        bool finite = u_phys.all_finite();
        double amp = finite ? max_abs(u_phys) : std::numeric_limits<double>::infinity();
        double G_now = finite ? l2_norm_sq(u_phys) : std::numeric_limits<double>::infinity();
        if (!finite || amp > config.blowup_amp_threshold || G_now > norm_cap) {
            result.t_detect = t;
            result.t_detect_bracket_lo = t_prev_step;
            finish(Outcome::blowup_detected);
            return result;
        }
        if (t_horizon > 0.0 && t > t_horizon) {
            finish(Outcome::propagation_horizon_exceeded);
            return result;
        }
        if (t >= t_end) {
            finish(Outcome::reached_horizon);
            return result;
        }

        // Step size from the local nonlinear frequency scale.
        double fp = eval_f_prime_bound(model, amp);
        double dt_raw = config.safety / std::sqrt(1.0 + fp);
        if (dt_raw < config.dt_min) {
            if (++underflow_streak > kUnderflowPatience) {
                finish(Outcome::step_underflow);
                return result;
            }
        } else {
            underflow_streak = 0;
        }
        dt = std::min(std::max(dt_raw, config.dt_min), config.dt_max);
        if (t + dt > t_end) dt = t_end - t;
        if (!(dt > 0.0)) {  // roundoff sliver left before t_end
            t = t_end;
            continue;
        }

        // Strang step, spectral-resident: half rotation, physical kick at the
        // midpoint, half rotation.
        t_prev_step = t;
        rotate_all(uh, vh, omega, 0.5 * dt, damping_a);
        ws.to_physical(uh, u_phys.values.data());
        ws.to_physical(vh, v_phys.values.data());
        Field f = kick_term(ws, u_phys, model, config.dealias);
        for (std::size_t i = 0; i < v_phys.values.size(); ++i)
            v_phys.values[i] += dt * f.values[i];
        ws.to_spectral(v_phys.values, vh.data());
        rotate_all(uh, vh, omega, 0.5 * dt, damping_a);

        t = t + dt;
        ++result.steps;
        ws.to_physical(uh, u_phys.values.data());

        if (result.steps % config.sample_every == 0) push_record();
    }
}

}  // namespace detail

TrajectoryResult run(const State& state0, const NonlinearityModel& model,
                     const SolverConfig& config) {
    return detail::run_impl(state0, model, config, 0.0);
}

std::string run_summary(const TrajectoryResult& r) {
    std::ostringstream out;
    out << "outcome=" << to_string(r.outcome) << '\n';
    out << "t_final=" << format_full(r.t_final) << '\n';
    if (r.outcome == Outcome::blowup_detected) {
        out << "t_detect=" << format_full(r.t_detect) << '\n';
        out << "t_detect_bracket_lo=" << format_full(r.t_detect_bracket_lo) << '\n';
    }
    out << "steps=" << r.steps << '\n';
    out << "final_dt=" << format_full(r.final_dt) << '\n';
    out << "records=" << r.records.size() << '\n';
    out << "wall_time_s=" << format_full(r.wall_time_s) << '\n';
    return out.str();
}

}  // namespace kglab
