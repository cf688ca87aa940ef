#include "kglab/ground_state.hpp"

#include "kglab/functionals.hpp"
#include "kglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace kglab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double signed_pow(double u, double p) {
    if (u == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(u), p), u);
}

// Lattice elliptic residual ||-lap u + u - u^p|| / ||u||.
double lattice_residual(const Field& u, double p) {
    Field lap = spectral_laplacian(u);
    Field res(u.grid);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        res.values[i] = -lap.values[i] + u.values[i] - signed_pow(u.values[i], p);
    double denom = l2_norm_sq(u);
    return denom > 0.0 ? std::sqrt(l2_norm_sq(res) / denom) : 0.0;
}

}  // namespace

GroundState solve_ground_state_1d(double p, const Grid& grid) {
    if (grid.n != 1) throw std::invalid_argument("solve_ground_state_1d: grid must be 1-d");
    if (!(p > 1.0)) throw std::invalid_argument("solve_ground_state_1d: p must be > 1");

    const double height = std::pow(0.5 * (p + 1.0), 1.0 / (p - 1.0));
    const double shape_pow = 2.0 / (p - 1.0);
    const double rate = 0.5 * (p - 1.0);

    Field profile = sample_field(grid, [&](double x, double, double) {
        return height * std::pow(1.0 / std::cosh(rate * x), shape_pow);
    });

    if (boundary_tail_mass(profile, 0.1) > 1e-12)
        throw std::invalid_argument("solve_ground_state_1d: tail mass above 1e-12 at this L");

    GroundState gs;
    gs.profile = profile;
    gs.p = p;
    gs.n = 1;
    gs.center_height = height;

    NonlinearityModel model = NonlinearityModel::pure_power_auto_eps(p);
    gs.d = action(profile, model);
    double norms = l2_norm_sq(profile) + grad_norm_sq(profile);
    gs.nehari_residual = norms > 0.0 ? std::fabs(nehari(profile, model)) / norms : 0.0;
    gs.elliptic_residual = lattice_residual(profile, p);

    // The closed form must survive substitution into the discrete equation.
    if (gs.elliptic_residual > 1e-6)
        throw std::runtime_error("solve_ground_state_1d: discrete elliptic residual too large");
    return gs;
}

namespace {

// Radial shooting machinery. State y = (u, u', and the running integrals
// of u^2, u'^2, |u|^(p+1) against c_n r^(n-1) dr).
struct RadialState {
    double u, w, q_norm, q_grad, q_pow;
};

struct RadialProblem {
    double p;
    int n;
    double surface;  // c_n: 2*pi (n=2) or 4*pi (n=3)

    RadialState deriv(double r, const RadialState& y) const {
        RadialState d;
        double up = signed_pow(y.u, p);
        d.u = y.w;
        d.w = y.u - up - (n - 1) / r * y.w;
        double wgt = surface * std::pow(r, n - 1);
        d.q_norm = wgt * y.u * y.u;
        d.q_grad = wgt * y.w * y.w;
        d.q_pow = wgt * std::pow(std::fabs(y.u), p + 1.0);
        return d;
    }
};

RadialState axpy(const RadialState& y, double a, const RadialState& d) {
    return {y.u + a * d.u, y.w + a * d.w, y.q_norm + a * d.q_norm, y.q_grad + a * d.q_grad,
            y.q_pow + a * d.q_pow};
}

enum class ShotClass { crossed_zero, diverged, reached_rmax };

struct ShotResult {
    ShotClass cls = ShotClass::reached_rmax;
    double r_stop = 0.0;       // where accumulation stopped
    RadialState at_stop{};
    std::vector<double> rs, us, ws;  // dense output up to r_stop
};

// Cash-Karp embedded RK45 with per-component error control.
ShotResult integrate_shot(const RadialProblem& prob, double eta, double r_max, double tol,
                          bool store_dense) {
    static const double A2 = 1.0 / 5, A3 = 3.0 / 10, A4 = 3.0 / 5, A5 = 1.0, A6 = 7.0 / 8;
    static const double B21 = 1.0 / 5;
    static const double B31 = 3.0 / 40, B32 = 9.0 / 40;
    static const double B41 = 3.0 / 10, B42 = -9.0 / 10, B43 = 6.0 / 5;
    static const double B51 = -11.0 / 54, B52 = 5.0 / 2, B53 = -70.0 / 27, B54 = 35.0 / 27;
    static const double B61 = 1631.0 / 55296, B62 = 175.0 / 512, B63 = 575.0 / 13824,
                        B64 = 44275.0 / 110592, B65 = 253.0 / 4096;
    static const double C1 = 37.0 / 378, C3 = 250.0 / 621, C4 = 125.0 / 594, C6 = 512.0 / 1771;
    static const double D1 = C1 - 2825.0 / 27648, D3 = C3 - 18575.0 / 48384,
                        D4 = C4 - 13525.0 / 55296, D5 = -277.0 / 14336, D6 = C6 - 1.0 / 4;

    ShotResult res;
    // Taylor start past the coordinate singularity.
    const double r0 = 1e-6;
    const double a = (eta - signed_pow(eta, prob.p)) / (2.0 * prob.n);
    RadialState y{eta + a * r0 * r0, 2.0 * a * r0, 0.0, 0.0, 0.0};
    double r = r0;
    double h = 1e-4;

    if (store_dense) {
        res.rs.push_back(r);
        res.us.push_back(y.u);
        res.ws.push_back(y.w);
    }

    const int max_steps = 2000000;
    for (int step = 0; step < max_steps && r < r_max; ++step) {
        if (r + h > r_max) h = r_max - r;

        RadialState k1 = prob.deriv(r, y);
        RadialState k2 = prob.deriv(r + A2 * h, axpy(y, h * B21, k1));
        RadialState y3 = axpy(axpy(y, h * B31, k1), h * B32, k2);
        RadialState k3 = prob.deriv(r + A3 * h, y3);
        RadialState y4 = axpy(axpy(axpy(y, h * B41, k1), h * B42, k2), h * B43, k3);
        RadialState k4 = prob.deriv(r + A4 * h, y4);
        RadialState y5 = axpy(axpy(axpy(axpy(y, h * B51, k1), h * B52, k2), h * B53, k3), h * B54, k4);
        RadialState k5 = prob.deriv(r + A5 * h, y5);
        RadialState y6 = axpy(
            axpy(axpy(axpy(axpy(y, h * B61, k1), h * B62, k2), h * B63, k3), h * B64, k4), h * B65, k5);
        RadialState k6 = prob.deriv(r + A6 * h, y6);

        RadialState ynew = y;
        ynew = axpy(ynew, h * C1, k1);
        ynew = axpy(ynew, h * C3, k3);
        ynew = axpy(ynew, h * C4, k4);
        ynew = axpy(ynew, h * C6, k6);

        double e_u = h * (D1 * k1.u + D3 * k3.u + D4 * k4.u + D5 * k5.u + D6 * k6.u);
        double e_w = h * (D1 * k1.w + D3 * k3.w + D4 * k4.w + D5 * k5.w + D6 * k6.w);
        double sc_u = tol * (1.0 + std::fabs(y.u));
        double sc_w = tol * (1.0 + std::fabs(y.w));
        double err = std::max(std::fabs(e_u) / sc_u, std::fabs(e_w) / sc_w);

        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.25));
            continue;
        }
        r += h;
        y = ynew;
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-16), -0.2)));

        if (store_dense) {
            res.rs.push_back(r);
            res.us.push_back(y.u);
            res.ws.push_back(y.w);
        }

        if (y.u <= 0.0) {
            res.cls = ShotClass::crossed_zero;
            res.r_stop = r;
            res.at_stop = y;
            return res;
        }
        if (y.w > 0.0 || y.u > 2.0 * eta) {
            res.cls = ShotClass::diverged;
            res.r_stop = r;
            res.at_stop = y;
            return res;
        }
    }
    res.cls = ShotClass::reached_rmax;
    res.r_stop = r;
    res.at_stop = y;
    return res;
}

// True-slope cubic Hermite on the dense shooting output.
double hermite_eval(const std::vector<double>& rs, const std::vector<double>& us,
                    const std::vector<double>& ws, double r) {
    if (r <= rs.front()) return us.front();
    if (r >= rs.back()) return us.back();
    auto it = std::upper_bound(rs.begin(), rs.end(), r);
    std::size_t i = static_cast<std::size_t>(it - rs.begin()) - 1;
    double h = rs[i + 1] - rs[i];
    double t = (r - rs[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * us[i] + h10 * h * ws[i] + h01 * us[i + 1] + h11 * h * ws[i + 1];
}

}  // namespace

GroundState solve_ground_state_radial(double p, int n, const Grid& grid,
                                      const RadialSolveOptions& opt) {
    if (n != 2 && n != 3)
        throw std::invalid_argument("solve_ground_state_radial: n must be 2 or 3");
    if (grid.n != n) throw std::invalid_argument("solve_ground_state_radial: grid dimension mismatch");
    if (!(p > 1.0)) throw std::invalid_argument("solve_ground_state_radial: p must be > 1");
    if (n == 3 && !(p < 5.0))
        throw std::invalid_argument("solve_ground_state_radial: p must be < (n+2)/(n-2) = 5 for n = 3");
    if (!(opt.r_max < 0.5 * grid.L) || !(opt.r_max > 2.0))
        throw std::invalid_argument("solve_ground_state_radial: need 2 < r_max < L/2");

    RadialProblem prob{p, n, n == 2 ? 2.0 * kPi : 4.0 * kPi};

    auto classify = [&](double eta) {
        return integrate_shot(prob, eta, opt.r_max, opt.ode_tol, false).cls;
    };

    // Bracket the shooting height between divergence (too low) and a zero
    // crossing (too high).
    double lo = opt.bracket_lo, hi = opt.bracket_hi;
    if (lo <= 0.0 || hi <= 0.0) {
        double eta = 1.2;
        double last_diverged = 0.0, first_crossed = 0.0;
        for (int i = 0; i < 60 && first_crossed == 0.0; ++i) {
            ShotClass c = classify(eta);
            if (c == ShotClass::crossed_zero) first_crossed = eta;
            else last_diverged = eta;
            if (first_crossed == 0.0) eta *= 1.35;
        }
        if (first_crossed == 0.0 || last_diverged == 0.0)
            throw std::runtime_error("solve_ground_state_radial: automatic bracket search failed");
        lo = last_diverged;
        hi = first_crossed;
    } else {
        if (classify(lo) == ShotClass::crossed_zero || classify(hi) != ShotClass::crossed_zero)
            throw std::invalid_argument("solve_ground_state_radial: supplied bracket does not bracket");
    }

    for (int i = 0; i < opt.max_bisections && (hi - lo) > 1e-15 * hi; ++i) {
        double mid = 0.5 * (lo + hi);
        if (classify(mid) == ShotClass::crossed_zero) hi = mid;
        else lo = mid;
    }
    const double eta = 0.5 * (lo + hi);

    ShotResult shot = integrate_shot(prob, eta, opt.r_max, opt.ode_tol, true);
    // Trim trailing points past the first numerical misbehavior so the dense
    // output is the trustworthy monotone part of the profile.
    std::size_t keep = shot.rs.size();
    while (keep > 2 && (shot.us[keep - 1] <= 0.0 || shot.ws[keep - 1] > 0.0)) --keep;
    shot.rs.resize(keep);
    shot.us.resize(keep);
    shot.ws.resize(keep);
    const double r_trust = shot.rs.back();
    const double u_trust = shot.us.back();

    if (u_trust > 1e-5 * eta)
        throw std::runtime_error(
            "solve_ground_state_radial: profile not decayed at r_max; enlarge r_max");

    GroundState gs;
    gs.p = p;
    gs.n = n;
    gs.center_height = eta;

    // Functionals from the radial quadrature accumulated along the shot.
    const RadialState& q = shot.at_stop;
    double norms = q.q_norm + q.q_grad;
    gs.d = 0.5 * norms - q.q_pow / (p + 1.0);
    gs.nehari_residual = norms > 0.0 ? std::fabs(norms - q.q_pow) / norms : 0.0;

    // Radial elliptic residual: the ODE evaluated on interval midpoints of the
    // Hermite reconstruction (L2-weighted, relative).
    {
        KahanAccumulator res_acc, nrm_acc;
        for (std::size_t i = 0; i + 1 < shot.rs.size(); ++i) {
            double rm = 0.5 * (shot.rs[i] + shot.rs[i + 1]);
            double h = shot.rs[i + 1] - shot.rs[i];
            if (h <= 0.0) continue;
            double u0 = shot.us[i], u1 = shot.us[i + 1];
            double w0 = shot.ws[i], w1 = shot.ws[i + 1];
            // Hermite piece evaluated at its midpoint (closed forms).
            double um = 0.5 * (u0 + u1) + 0.125 * h * (w0 - w1);
            double wm = 1.5 * (u1 - u0) / h - 0.25 * (w0 + w1);
            double upp = (w1 - w0) / h;
            double wgt = prob.surface * std::pow(rm, n - 1) * h;
            double resid = upp + (n - 1) / rm * wm - um + signed_pow(um, p);
            res_acc.add(wgt * resid * resid);
            nrm_acc.add(wgt * um * um);
        }
        gs.elliptic_residual =
            nrm_acc.sum() > 0.0 ? std::sqrt(res_acc.sum() / nrm_acc.sum()) : 0.0;
    }

    // Resample onto the lattice; beyond the trusted radius attach the
    // asymptotic tail u ~ C e^{-r} r^{-(n-1)/2}.
    const double tail_c = u_trust * std::exp(r_trust) * std::pow(r_trust, 0.5 * (n - 1));
    gs.profile = sample_field(grid, [&](double x, double y, double z) {
        double r = std::sqrt(x * x + y * y + z * z);
        if (r <= r_trust)
            return hermite_eval(shot.rs, shot.us, shot.ws, r);
        return tail_c * std::exp(-r) * std::pow(r, -0.5 * (n - 1));
    });
    return gs;
}

std::vector<DichotomyRow> dichotomy_experiment(double p, int n, const Grid& grid,
                                               const std::vector<double>& lambdas,
                                               const SolverConfig& config) {
    GroundState gs = n == 1 ? solve_ground_state_1d(p, grid) : solve_ground_state_radial(p, n, grid);
    NonlinearityModel model = NonlinearityModel::pure_power_auto_eps(p);

    std::vector<DichotomyRow> rows;
    for (double lambda : lambdas) {
        if (lambda == 1.0)
            throw std::invalid_argument("dichotomy_experiment: lambda = 1 sits on the manifold");
        Field u0 = gs.profile;
        for (double& v : u0.values) v *= lambda;
        State s0(u0, Field(grid), 0.0);

        DichotomyRow row;
        row.lambda = lambda;
        row.e0 = energy(s0, model);
        row.i_u0 = nehari(u0, model);

        TrajectoryResult res = run(s0, model, config);
        row.outcome = res.outcome;
        row.t_detect = res.outcome == Outcome::blowup_detected ? res.t_detect : 0.0;
        double G0 = res.records.front().G;
        for (const auto& r : res.records)
            row.max_G_ratio = std::max(row.max_G_ratio, G0 > 0.0 ? r.G / G0 : 0.0);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace kglab
