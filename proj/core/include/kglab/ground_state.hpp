#pragma once

#include "kglab/field.hpp"
#include "kglab/grid.hpp"
#include "kglab/solver.hpp"

#include <string>
#include <vector>

namespace kglab {

/// Positive radial solution of -laplace(u) + u = u^p and the action level
/// d = J(u) it realizes on the Nehari manifold.
struct GroundState {
    Field profile;      // resampled onto the lattice
    double d = 0.0;     // action level J(ubar)
    double p = 0.0;
    int n = 1;
    double center_height = 0.0;  // u(0)
    double nehari_residual = 0.0;   // |I(ubar)| / (||u||^2 + ||grad u||^2)
    double elliptic_residual = 0.0; // ||-lap u + u - u^p|| / ||u||
};

/// n = 1: samples the closed-form solitary wave
/// ubar(x) = ((p+1)/2)^(1/(p-1)) sech^(2/(p-1))((p-1)x/2)
/// and verifies it by the discrete elliptic residual. Requires tails below
/// 1e-12 at the torus edge.
GroundState solve_ground_state_1d(double p, const Grid& grid);

struct RadialSolveOptions {
    double r_max = 25.0;
    double ode_tol = 1e-12;      // adaptive RK tolerance
    int max_bisections = 80;
    double bracket_lo = 0.0;     // 0 -> automatic bracket search
    double bracket_hi = 0.0;
};

/// n = 2 or 3: shooting on u'' + (n-1)/r u' - u + u^p = 0, u'(0) = u0,
/// bisecting the initial height between sign-crossing and divergence.
/// Functionals are accumulated by radial quadrature along the integration;
/// the profile is resampled onto the grid by cubic interpolation in r.
GroundState solve_ground_state_radial(double p, int n, const Grid& grid,
                                      const RadialSolveOptions& opt = {});

struct DichotomyRow {
    double lambda = 0.0;
    double e0 = 0.0;
    double i_u0 = 0.0;
    Outcome outcome = Outcome::reached_horizon;
    double t_detect = 0.0;
    double max_G_ratio = 0.0;  // max G(t)/G(0) over the run
};

/// For each lambda != 1: run u0 = lambda*ubar, u1 = 0 and record the outcome.
/// Expected pattern: lambda < 1 stays bounded, lambda > 1 blows up.
/// Unexpected outcomes are recorded, not suppressed.
std::vector<DichotomyRow> dichotomy_experiment(double p, int n, const Grid& grid,
                                               const std::vector<double>& lambdas,
                                               const SolverConfig& config);

}  // namespace kglab
