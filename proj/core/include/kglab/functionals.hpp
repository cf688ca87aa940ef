#pragma once

#include "kglab/field.hpp"
#include "kglab/nonlinearity.hpp"

#include <string>
#include <vector>

namespace kglab {

/// Every scalar functional of one state at one time, in the 10-column CSV
/// order t,E,I,J,G,dG,ddG,u_max,tail,concavity_gap.
struct DiagnosticsRecord {
    double t = 0.0;
    double E = 0.0;      // conserved energy
    double I = 0.0;      // Nehari functional
    double J = 0.0;      // action (NaN for custom nonlinearities)
    double G = 0.0;      // ||u||^2
    double dG = 0.0;     // 2<u,v>
    double ddG = 0.0;    // 2(||v||^2 - I)
    double u_max = 0.0;
    double tail = 0.0;   // boundary_tail_mass at margin 0.1
    double concavity_gap = 0.0; // ddG*G - (4+eps)/4 * dG^2
};

/// E = 1/2 [ ||v||^2 + ||u||^2 + ||grad u||^2 - 2 int F(u) ].
double energy(const State& state, const NonlinearityModel& model);

/// I(u) = ||u||^2 + ||grad u||^2 - int f(u) u.
double nehari(const Field& u, const NonlinearityModel& model);

/// J(u) = 1/2 (||u||^2 + ||grad u||^2) - 1/(p+1) int |u|^(p+1). Pure powers
/// only (coefficient b folded in).
double action(const Field& u, const NonlinearityModel& model);

struct GDerivatives {
    double G = 0.0;
    double dG = 0.0;
    double ddG = 0.0;
};

/// G = ||u||^2, G' = 2<u,v>, and G'' from the identity
/// G''/2 = ||u_t||^2 - I(u), never from differencing a time series.
GDerivatives G_and_derivatives(const State& state, const NonlinearityModel& model);

DiagnosticsRecord diagnostics(const State& state, const NonlinearityModel& model);

inline constexpr const char* kDiagnosticsCsvHeader =
    "t,E,I,J,G,dG,ddG,u_max,tail,concavity_gap";

/// One CSV row, 17 significant digits, "." decimal separator, no newline.
std::string to_csv_row(const DiagnosticsRecord& r);

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                           const std::string& path);

}  // namespace kglab
