#pragma once

#include <functional>
#include <string>

namespace kglab {

/// Nonlinear power f(u), its antiderivative F, and the superlinearity margin
/// eps of the structural assumption f(s)s >= (2+eps) F(s).
///
/// pure_power: f(s) = b|s|^(p-1)s, F(s) = b|s|^(p+1)/(p+1). b = 0 is accepted
/// and means the linear equation (f == 0). custom carries a user-supplied
/// (f, F) pair; the structural assumption is then checked numerically on a
/// sample grid rather than proven.
struct NonlinearityModel {
    enum class Kind { pure_power, custom };

    Kind kind = Kind::pure_power;
    double p = 3.0;       // growth exponent
    double b = 1.0;       // coefficient, >= 0
    double epsilon = 2.0; // margin in f(s)s >= (2+eps)F(s)

    std::function<double(double)> f_custom;
    std::function<double(double)> F_custom;

    static NonlinearityModel pure_power(double p, double eps, double b = 1.0);
    /// eps = p - 1, the maximal admissible margin for a pure power.
    static NonlinearityModel pure_power_auto_eps(double p, double b = 1.0);
    static NonlinearityModel custom(std::function<double(double)> f,
                                    std::function<double(double)> F, double p, double eps);

    void validate() const;
};

double eval_f(const NonlinearityModel& model, double s);
double eval_F(const NonlinearityModel& model, double s);

/// Derivative scale p*b*|s|^(p-1) used by the adaptive step controller.
double eval_f_prime_bound(const NonlinearityModel& model, double s);

struct Pc1Report {
    bool ok = false;
    double max_eps = 0.0;      // largest eps' satisfied on the grid
    double worst_s = 0.0;      // violating sample when !ok
    double worst_margin = 0.0; // f(s)s - (2+eps)F(s) at worst_s
};

/// Checks f(s)s >= (2+eps)F(s) on a symmetric sample grid in [-s_max, s_max]
/// (log-spaced positives, mirrored, plus 0). max_eps is inf over samples with
/// F(s) > 0 of f(s)s/F(s) - 2. Points with |F| < 1e-300 are skipped.
Pc1Report verify_pc1(const NonlinearityModel& model, double s_max, int n_samples);

struct HypothesisReport {
    bool ok = false;
    std::string violated; // empty when ok
    explicit operator bool() const { return ok; }
};

/// Local-existence hypotheses: f(0) = 0, the Lipschitz growth bound, and the
/// subcritical exponent range (p > 1 for n <= 2, 1 < p < 3 for n = 3).
HypothesisReport verify_local_existence_hypotheses(const NonlinearityModel& model, int n);

}  // namespace kglab
