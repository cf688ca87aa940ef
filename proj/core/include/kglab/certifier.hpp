#pragma once

#include "kglab/initial_data.hpp"
#include "kglab/solver.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace kglab {

enum class Verdict { certified_blowup, static_fail, monitor_violation, inconclusive };

const char* to_string(Verdict v);
int exit_code(Verdict v);  // 0 / 2 / 3 / 4

struct BoundPair {
    double t_derived = 0.0;    // 4 G(0) / (eps G'(0)), from the concavity chord
    double t_paper_expr = 0.0; // eps G(0) / (4 G'(0)), the printed expression
};

/// Both blow-up time bounds. The derived value is where the linear majorant
/// of G^(-alpha), alpha = eps/4, vanishes; the other form is reported for
/// comparison (they coincide only at eps = 4). Requires G0, dG0, eps > 0.
BoundPair blowup_time_bound(double G0, double dG0, double eps);

struct MonitorViolation {
    enum class Kind { nehari_sign, dG_sign, concavity_gap, discrete_concavity };
    Kind kind;
    double t;
    double value;
};

struct TrajectoryMonitorReport {
    std::size_t records_checked = 0;
    std::vector<MonitorViolation> violations;
    // relative tolerance scales used, recorded for the report
    double gap_tol_rel = 0.0;
    double d2_tol_rel = 0.0;

    bool clean() const { return violations.empty(); }
};

/// Per record: I < 0, G' > 0, concavity gap >= -tol_rel*(|ddG*G| + dG^2).
/// Per consecutive record triple: three-point nonuniform second difference of
/// G^(-alpha) <= +tol (scale-aware). Violations are data, not errors.
TrajectoryMonitorReport monitor_trajectory(const TrajectoryResult& result, double eps);

struct BlowupCertificate {
    StaticCertificate static_part;
    double alpha = 0.0;  // eps/4
    BoundPair bound;
    TrajectoryMonitorReport trajectory;
    Outcome solver_outcome = Outcome::reached_horizon;
    double t_detect = 0.0;
    Verdict verdict = Verdict::inconclusive;
};

/// Verdict rules: static fail wins; then any monitor violation; then
/// certified_blowup iff the solver detected blow-up no later than the derived
/// bound; anything else is inconclusive.
BlowupCertificate assemble(const StaticCertificate& static_part, const BoundPair& bound,
                           const TrajectoryMonitorReport& trajectory, Outcome solver_outcome,
                           double t_detect, double eps);

/// Human-readable report plus machine-readable key=value block.
std::string render_certificate(const BlowupCertificate& c);

}  // namespace kglab
