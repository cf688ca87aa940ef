#include "kglab/certifier.hpp"

#include "kglab/run_config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kglab {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified_blowup: return "certified_blowup";
        case Verdict::static_fail: return "static_fail";
        case Verdict::monitor_violation: return "monitor_violation";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::certified_blowup: return 0;
        case Verdict::static_fail: return 2;
        case Verdict::monitor_violation: return 3;
        case Verdict::inconclusive: return 4;
    }
    return 4;
}

BoundPair blowup_time_bound(double G0, double dG0, double eps) {
    if (!(G0 > 0.0) || !(dG0 > 0.0) || !(eps > 0.0))
        throw std::invalid_argument("blowup_time_bound: G0, G'(0) and eps must be positive");
    BoundPair b;
    // G^(-alpha) is positive, decreasing and concave with alpha = eps/4, so it
    // dies no later than where its tangent at 0 vanishes:
    //   t = G(0) / (alpha G'(0)) = 4 G(0) / (eps G'(0)).
    b.t_derived = 4.0 * G0 / (eps * dG0);
    b.t_paper_expr = eps * G0 / (4.0 * dG0);
    return b;
}

namespace {

// Relative tolerances: the gap check is scaled by the local magnitude of its
// two terms (G spans orders of magnitude near blow-up), the discrete second
// difference by the absolute-value-weighted stencil magnitude.
constexpr double kGapTolRel = 1e-9;
constexpr double kD2TolRel = 1e-6;

}  // namespace

TrajectoryMonitorReport monitor_trajectory(const TrajectoryResult& result, double eps) {
    if (result.records.size() < 3)
        throw std::invalid_argument("monitor_trajectory: need at least 3 records");
    if (!(eps > 0.0)) throw std::invalid_argument("monitor_trajectory: eps must be positive");

    TrajectoryMonitorReport rep;
    rep.records_checked = result.records.size();
    rep.gap_tol_rel = kGapTolRel;
    rep.d2_tol_rel = kD2TolRel;
    const double alpha = 0.25 * eps;

    for (const auto& r : result.records) {
        if (!(r.I < 0.0))
            rep.violations.push_back({MonitorViolation::Kind::nehari_sign, r.t, r.I});
        if (!(r.dG > 0.0))
            rep.violations.push_back({MonitorViolation::Kind::dG_sign, r.t, r.dG});
        double scale = std::fabs(r.ddG * r.G) + r.dG * r.dG;
        if (r.concavity_gap < -kGapTolRel * scale)
            rep.violations.push_back({MonitorViolation::Kind::concavity_gap, r.t, r.concavity_gap});
    }

    // Discrete concavity of G^(-alpha): three-point second difference on the
    // nonuniform sample times must stay <= +tol.
    for (std::size_t i = 1; i + 1 < result.records.size(); ++i) {
        const auto& a = result.records[i - 1];
        const auto& b = result.records[i];
        const auto& c = result.records[i + 1];
        double h1 = b.t - a.t, h2 = c.t - b.t;
        if (!(h1 > 0.0 && h2 > 0.0)) continue;
        double ya = std::pow(a.G, -alpha), yb = std::pow(b.G, -alpha), yc = std::pow(c.G, -alpha);
        double wa = 2.0 / (h1 * (h1 + h2));
        double wb = -2.0 / (h1 * h2);
        double wc = 2.0 / (h2 * (h1 + h2));
        double d2 = wa * ya + wb * yb + wc * yc;
        double scale = std::fabs(wa * ya) + std::fabs(wb * yb) + std::fabs(wc * yc);
        if (d2 > kD2TolRel * scale)
            rep.violations.push_back({MonitorViolation::Kind::discrete_concavity, b.t, d2});
    }
    return rep;
}

BlowupCertificate assemble(const StaticCertificate& static_part, const BoundPair& bound,
                           const TrajectoryMonitorReport& trajectory, Outcome solver_outcome,
                           double t_detect, double eps) {
    BlowupCertificate cert;
    cert.static_part = static_part;
    cert.alpha = 0.25 * eps;
    cert.bound = bound;
    cert.trajectory = trajectory;
    cert.solver_outcome = solver_outcome;
    cert.t_detect = t_detect;

    if (!static_part.all_pass()) {
        cert.verdict = Verdict::static_fail;
    } else if (!trajectory.clean()) {
        cert.verdict = Verdict::monitor_violation;
    } else if (solver_outcome == Outcome::blowup_detected && t_detect <= bound.t_derived) {
        cert.verdict = Verdict::certified_blowup;
    } else {
        cert.verdict = Verdict::inconclusive;
    }
    return cert;
}

namespace {

const char* violation_name(MonitorViolation::Kind k) {
    switch (k) {
        case MonitorViolation::Kind::nehari_sign: return "nehari_sign";
        case MonitorViolation::Kind::dG_sign: return "dG_sign";
        case MonitorViolation::Kind::concavity_gap: return "concavity_gap";
        case MonitorViolation::Kind::discrete_concavity: return "discrete_concavity";
    }
    return "unknown";
}

}  // namespace

std::string render_certificate(const BlowupCertificate& c) {
    std::ostringstream out;
    const auto& s = c.static_part;
    out << "=== blow-up certificate ===\n";
    out << "static conditions (eps = " << format_full(s.eps) << "):\n";
    out << "  TC1  E(0) > 0:                 " << (s.tc1 ? "pass" : "FAIL")
        << "   E(0) = " << format_full(s.e0) << '\n';
    out << "  TC2  ||u0||^2 >= threshold:    " << (s.tc2 ? "pass" : "FAIL")
        << "   ||u0||^2 = " << format_full(s.u0_norm_sq)
        << "  threshold = " << format_full(s.threshold) << '\n';
    out << "  TC3  I(u0) < 0:                " << (s.tc3 ? "pass" : "FAIL")
        << "   I(u0) = " << format_full(s.i_u0) << '\n';
    out << "  TC4  <u0,u1> > 0:              " << (s.tc4 ? "pass" : "FAIL")
        << "   <u0,u1> = " << format_full(s.inner_u0_u1) << '\n';
    out << "bounds (alpha = " << format_full(c.alpha) << "):\n";
    out << "  t_bound_derived    = " << format_full(c.bound.t_derived) << '\n';
    out << "  t_bound_paper_expr = " << format_full(c.bound.t_paper_expr) << '\n';
    out << "trajectory monitors: " << c.trajectory.records_checked << " records, "
        << c.trajectory.violations.size() << " violations\n";
    for (const auto& v : c.trajectory.violations)
        out << "  violation " << violation_name(v.kind) << " at t = " << format_full(v.t)
            << " value = " << format_full(v.value) << '\n';
    out << "solver outcome: " << to_string(c.solver_outcome);
    if (c.solver_outcome == Outcome::blowup_detected)
        out << " at t_detect = " << format_full(c.t_detect);
    out << '\n';
    out << "verdict: " << to_string(c.verdict) << '\n';

    out << "---\n";
    out << "verdict=" << to_string(c.verdict) << '\n';
    out << "eps=" << format_full(s.eps) << '\n';
    out << "alpha=" << format_full(c.alpha) << '\n';
    out << "E0=" << format_full(s.e0) << '\n';
    out << "u0_norm_sq=" << format_full(s.u0_norm_sq) << '\n';
    out << "I_u0=" << format_full(s.i_u0) << '\n';
    out << "inner_u0_u1=" << format_full(s.inner_u0_u1) << '\n';
    out << "threshold=" << format_full(s.threshold) << '\n';
    out << "tc1=" << (s.tc1 ? 1 : 0) << "\ntc2=" << (s.tc2 ? 1 : 0) << "\ntc3=" << (s.tc3 ? 1 : 0)
        << "\ntc4=" << (s.tc4 ? 1 : 0) << '\n';
    out << "t_bound_derived=" << format_full(c.bound.t_derived) << '\n';
    out << "t_bound_paper_expr=" << format_full(c.bound.t_paper_expr) << '\n';
    out << "monitor_violations=" << c.trajectory.violations.size() << '\n';
    out << "solver_outcome=" << to_string(c.solver_outcome) << '\n';
    out << "t_detect=" << format_full(c.t_detect) << '\n';
    return out.str();
}

}  // namespace kglab
