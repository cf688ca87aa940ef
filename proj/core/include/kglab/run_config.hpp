#pragma once

#include "kglab/damped.hpp"
#include "kglab/grid.hpp"
#include "kglab/initial_data.hpp"
#include "kglab/nonlinearity.hpp"
#include "kglab/solver.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace kglab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One batch run: flat key=value text with [section] headers. Unknown keys
/// and sections are rejected; every referenced parameter is validated before
/// any compute.
struct RunConfig {
    enum class Equation { kg, damped };

    Equation equation = Equation::kg;
    NonlinearityModel model = NonlinearityModel::pure_power_auto_eps(3.0);
    Grid grid{1, 2.0 * 3.14159265358979323846, 512};

    bool synthesize = false;      // [data] target_energy instead of a profile
    double target_energy = 0.0;
    DataRecipe recipe;

    SolverConfig solver;
    DampedConfig damped;
    std::string out_dir = "out";

    // [sweep] lists; empty when not sweeping
    std::vector<double> sweep_lambda;
    std::vector<double> sweep_sigma;
    std::vector<double> sweep_p;
    std::vector<double> sweep_a;
    std::vector<double> sweep_target_energy;

    bool has_sweep() const {
        return !(sweep_lambda.empty() && sweep_sigma.empty() && sweep_p.empty() &&
                 sweep_a.empty() && sweep_target_energy.empty());
    }
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Floating-point formatting used for every CSV and report value:
/// 17 significant digits, "." separator, reproducible as input.
std::string format_full(double x);

}  // namespace kglab
