#include "kglab/functionals.hpp"

#include "kglab/run_config.hpp"
#include "kglab/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace kglab {

namespace {

// int f(u) u and int F(u) share one pass over the lattice.
void nonlinear_integrals(const Field& u, const NonlinearityModel& model, double& int_fu_u,
                         double& int_F) {
    KahanAccumulator a_fu, a_F;
    if (model.kind == NonlinearityModel::Kind::pure_power) {
        const double p = model.p, b = model.b;
        for (double s : u.values) {
            double mag = std::pow(std::fabs(s), p + 1.0);
            a_fu.add(b * mag);
            a_F.add(b * mag / (p + 1.0));
        }
    } else {
        for (double s : u.values) {
            a_fu.add(model.f_custom(s) * s);
            a_F.add(model.F_custom(s));
        }
    }
    const double w = u.grid.cell_volume();
    int_fu_u = w * a_fu.sum();
    int_F = w * a_F.sum();
}

}  // namespace

double energy(const State& state, const NonlinearityModel& model) {
    double int_fu_u = 0.0, int_F = 0.0;
    nonlinear_integrals(state.u, model, int_fu_u, int_F);
    return 0.5 * (l2_norm_sq(state.v) + l2_norm_sq(state.u) + grad_norm_sq(state.u)) - int_F;
}

double nehari(const Field& u, const NonlinearityModel& model) {
    double int_fu_u = 0.0, int_F = 0.0;
    nonlinear_integrals(u, model, int_fu_u, int_F);
    return l2_norm_sq(u) + grad_norm_sq(u) - int_fu_u;
}

double action(const Field& u, const NonlinearityModel& model) {
    if (model.kind != NonlinearityModel::Kind::pure_power)
        return std::numeric_limits<double>::quiet_NaN();  // defined for powers only
    KahanAccumulator acc;
    const double p = model.p;
    for (double s : u.values) acc.add(std::pow(std::fabs(s), p + 1.0));
    double int_up1 = model.b * u.grid.cell_volume() * acc.sum();
    return 0.5 * (l2_norm_sq(u) + grad_norm_sq(u)) - int_up1 / (p + 1.0);
}

GDerivatives G_and_derivatives(const State& state, const NonlinearityModel& model) {
    GDerivatives g;
    g.G = l2_norm_sq(state.u);
    g.dG = 2.0 * inner_product(state.u, state.v);
    g.ddG = 2.0 * (l2_norm_sq(state.v) - nehari(state.u, model));
    return g;
}

DiagnosticsRecord diagnostics(const State& state, const NonlinearityModel& model) {
    DiagnosticsRecord r;
    r.t = state.t;

    double int_fu_u = 0.0, int_F = 0.0;
    nonlinear_integrals(state.u, model, int_fu_u, int_F);
    const double u_sq = l2_norm_sq(state.u);
    const double v_sq = l2_norm_sq(state.v);
    const double grad_sq = grad_norm_sq(state.u);

    r.E = 0.5 * (v_sq + u_sq + grad_sq) - int_F;
    r.I = u_sq + grad_sq - int_fu_u;
    r.J = model.kind == NonlinearityModel::Kind::pure_power
              ? 0.5 * (u_sq + grad_sq) - int_fu_u / (model.p + 1.0)
              : std::numeric_limits<double>::quiet_NaN();
    r.G = u_sq;
    r.dG = 2.0 * inner_product(state.u, state.v);
    r.ddG = 2.0 * (v_sq - r.I);
    r.u_max = max_abs(state.u);
    r.tail = boundary_tail_mass(state.u, 0.1);
    r.concavity_gap = r.ddG * r.G - 0.25 * (4.0 + model.epsilon) * r.dG * r.dG;
    return r;
}

std::string to_csv_row(const DiagnosticsRecord& r) {
    std::string row;
    const double cols[10] = {r.t, r.E, r.I, r.J, r.G, r.dG, r.ddG, r.u_max, r.tail, r.concavity_gap};
    for (int i = 0; i < 10; ++i) {
        if (i) row += ',';
        row += format_full(cols[i]);
    }
    return row;
}

void write_diagnostics_csv(const std::vector<DiagnosticsRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_diagnostics_csv: cannot open " + path);
    out << kDiagnosticsCsvHeader << '\n';
    for (const auto& r : records) out << to_csv_row(r) << '\n';
}

}  // namespace kglab
