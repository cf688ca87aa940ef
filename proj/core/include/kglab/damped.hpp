#pragma once

#include "kglab/initial_data.hpp"
#include "kglab/solver.hpp"

#include <string>
#include <vector>

namespace kglab {

/// Damped wave variant u_tt + a u_t - laplace(u) + u = b|u|^(p-1)u with the
/// auxiliary-function horizon constant T0.
struct DampedConfig {
    double a = 0.1;   // damping coefficient, >= 0 (0 reduces to the undamped flow)
    double T0 = 20.0; // horizon constant of the modified auxiliary function

    void validate() const;
};

/// One Strang step of the damped flow: the linear-plus-damping subsystem is
/// advanced exactly per mode (underdamped/critical/overdamped branches of
/// u_hat'' + a u_hat' + w^2 u_hat = 0), the kick is v += dt f(u). At a = 0
/// the mode update takes the identical code path as the undamped stepper.
State damped_step(const State& state, const NonlinearityModel& model, double a, double dt,
                  bool dealias = false);

struct DampedSeriesPoint {
    double t = 0.0;
    double G_damped = 0.0;   // ||u||^2 + int_0^t ||u||^2 dtau + (T0-t)||u0||^2
    double dG_damped = 0.0;  // 2<u,v> + ||u||^2 - ||u0||^2
};

/// Modified auxiliary function along a recorded trajectory; the time integral
/// is accumulated by trapezoid over the adaptive sample times.
std::vector<DampedSeriesPoint> damped_G(const std::vector<DiagnosticsRecord>& records,
                                        double T0);

struct DampedRunResult {
    TrajectoryResult trajectory;
    std::vector<DampedSeriesPoint> damped_series;
    StaticCertificate static_part;  // four conditions with the damped energy
    std::size_t nehari_violations = 0;
    std::size_t damped_growth_violations = 0;  // dG_damped <= 0 while static passed
    bool demonstration_ok = false;  // static pass + monitors clean + blow-up detected
};

/// Monitored demonstration (not a certificate) of the damped analogue:
/// realizes the recipe, evaluates the four static conditions with the damped
/// energy, runs the damped dynamics, and monitors I(u) < 0 and growth of the
/// modified auxiliary function.
DampedRunResult damped_blowup_run(const RealizedData& data, const NonlinearityModel& model,
                                  const DampedConfig& damped, const SolverConfig& config);

inline constexpr const char* kDampedCsvHeader =
    "t,E,I,J,G,dG,ddG,u_max,tail,concavity_gap,G_damped,dG_damped";

void write_damped_csv(const std::vector<DiagnosticsRecord>& records,
                      const std::vector<DampedSeriesPoint>& series, const std::string& path);

}  // namespace kglab
