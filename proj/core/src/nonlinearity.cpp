#include "kglab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace kglab {

NonlinearityModel NonlinearityModel::pure_power(double p, double eps, double b) {
    NonlinearityModel m;
    m.kind = Kind::pure_power;
    m.p = p;
    m.b = b;
    m.epsilon = eps;
    m.validate();
    return m;
}

NonlinearityModel NonlinearityModel::pure_power_auto_eps(double p, double b) {
    return pure_power(p, p - 1.0, b);
}

NonlinearityModel NonlinearityModel::custom(std::function<double(double)> f,
                                            std::function<double(double)> F, double p,
                                            double eps) {
    NonlinearityModel m;
    m.kind = Kind::custom;
    m.f_custom = std::move(f);
    m.F_custom = std::move(F);
    m.p = p;
    m.epsilon = eps;
    m.validate();
    return m;
}

void NonlinearityModel::validate() const {
    if (!(epsilon > 0.0)) throw std::invalid_argument("NonlinearityModel: epsilon must be > 0");
    if (kind == Kind::pure_power) {
        if (!(p > 1.0)) throw std::invalid_argument("NonlinearityModel: exponent p must be > 1");
        if (!(b >= 0.0)) throw std::invalid_argument("NonlinearityModel: coefficient b must be >= 0");
        if (epsilon > p - 1.0 + 1e-12)
            throw std::invalid_argument(
                "NonlinearityModel: eps exceeds p-1, the maximal margin for a pure power");
    } else {
        if (!f_custom || !F_custom)
            throw std::invalid_argument("NonlinearityModel: custom model needs both f and F");
        if (f_custom(0.0) != 0.0)
            throw std::invalid_argument("NonlinearityModel: f(0) must be 0");
    }
}

double eval_f(const NonlinearityModel& model, double s) {
    if (model.kind == NonlinearityModel::Kind::custom) return model.f_custom(s);
    if (s == 0.0) return 0.0;
    return model.b * std::pow(std::fabs(s), model.p - 1.0) * s;
}

double eval_F(const NonlinearityModel& model, double s) {
    if (model.kind == NonlinearityModel::Kind::custom) return model.F_custom(s);
    return model.b * std::pow(std::fabs(s), model.p + 1.0) / (model.p + 1.0);
}

double eval_f_prime_bound(const NonlinearityModel& model, double s) {
    double p = model.p;
    double b = model.kind == NonlinearityModel::Kind::pure_power ? model.b : 1.0;
    return p * b * std::pow(std::fabs(s), p - 1.0);
}

Pc1Report verify_pc1(const NonlinearityModel& model, double s_max, int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("verify_pc1: n_samples must be >= 2");
    if (!(s_max > 0.0)) throw std::invalid_argument("verify_pc1: s_max must be > 0");

    // Log-spaced positive samples, mirrored, plus 0. Homogeneity of the pure
    // power makes the grid check exact; custom models get coverage only.
    std::vector<double> samples;
    samples.reserve(2 * static_cast<std::size_t>(n_samples) + 1);
    samples.push_back(0.0);
    const double lo = s_max * 1e-8;
    for (int i = 0; i < n_samples; ++i) {
        double t = n_samples == 1 ? 1.0 : static_cast<double>(i) / (n_samples - 1);
        double s = lo * std::pow(s_max / lo, t);
        samples.push_back(s);
        samples.push_back(-s);
    }

    const double need = 2.0 + model.epsilon;
    constexpr double kRelTol = 1e-9;

    Pc1Report rep;
    rep.ok = true;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (double s : samples) {
        double fs = eval_f(model, s);
        double Fs = eval_F(model, s);
        if (std::fabs(Fs) < 1e-300) continue;  // 0 >= 0, trivially fine
        double lhs = fs * s;
        double margin = lhs - need * Fs;
        if (margin < -kRelTol * std::fabs(Fs) && margin < rep.worst_margin) {
            rep.ok = false;
            rep.worst_s = s;
            rep.worst_margin = margin;
        }
        if (Fs > 0.0) min_ratio = std::min(min_ratio, lhs / Fs);
    }
    rep.max_eps = std::isfinite(min_ratio) ? min_ratio - 2.0 : 0.0;
    return rep;
}

HypothesisReport verify_local_existence_hypotheses(const NonlinearityModel& model, int n) {
    if (n < 1 || n > 3)
        throw std::invalid_argument("verify_local_existence_hypotheses: n must be 1, 2 or 3");

    HypothesisReport rep;
    if (eval_f(model, 0.0) != 0.0) {
        rep.violated = "f(0) != 0";
        return rep;
    }
    if (!(model.p > 1.0)) {
        rep.violated = "p <= 1";
        return rep;
    }
    if (n == 3 && !(model.p < 3.0)) {
        rep.violated = "p >= n/(n-2) for n = 3 (local theory needs p < 3)";
        return rep;
    }
    if (model.kind == NonlinearityModel::Kind::custom) {
        // Lipschitz growth bound checked numerically on a sample grid with one
        // fitted constant; for pure powers it holds automatically.
        const int m = 64;
        double c = 0.0;
        for (int i = 1; i <= m; ++i) {
            double l1 = -10.0 + 20.0 * i / m;
            for (int j = 0; j < i; ++j) {
                double l2 = -10.0 + 20.0 * j / m;
                double denom =
                    (std::pow(std::fabs(l1), model.p - 1.0) + std::pow(std::fabs(l2), model.p - 1.0)) *
                    std::fabs(l1 - l2);
                if (denom < 1e-300) continue;
                c = std::max(c, std::fabs(model.f_custom(l1) - model.f_custom(l2)) / denom);
            }
        }
        if (!(c < 1e6)) {
            rep.violated = "no moderate Lipschitz growth constant on [-10,10]";
            return rep;
        }
    }
    rep.ok = true;
    return rep;
}

}  // namespace kglab
