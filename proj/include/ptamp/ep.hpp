#pragma once

#include <utility>
#include <vector>

#include "ptamp/numerics/ode.hpp"
#include "ptamp/signals.hpp"

namespace ptamp::ep {

// Coefficients of the quadratic invariant g1 p^2 + g2 x^2 + g3 {x,p};
// the additive constant is fixed to zero. Along any solution
// g3^2 - g1 g2 = -eta0^2.
struct GCoefficients {
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
};

// Branch labels for the power-law model M0 = t, Omega0 = 1/t: the first
// index selects the inner sign in eta^2 = c1 ± sqrt(c1^2-1)|sin(2c2 -
// 2 ln t)|, the trailing sign the overall sign of eta.
enum class ToyBranch { one_plus, one_minus, two_plus, two_minus };

inline bool toy_branch_positive(ToyBranch b) {
    return b == ToyBranch::one_plus || b == ToyBranch::two_plus;
}
inline double toy_branch_inner_sign(ToyBranch b) {
    return (b == ToyBranch::one_plus || b == ToyBranch::one_minus) ? 1.0 : -1.0;
}

struct ToyEtaValue {
    double eta = 0.0;
    double etadot = 0.0;
    bool at_kink = false;  // |sin| hit a zero; etadot is the one-sided limit from above in t
};

// |sin| form with derivative kinks where the sine vanishes.
ToyEtaValue toy_eta(double c1, double c2, ToyBranch branch, double t);
// Pole-free smooth variant eta^2 = c1 + sign * sqrt(c1^2-1) sin(...).
ToyEtaValue toy_eta_smooth(double c1, double c2, ToyBranch branch, double t);

enum class ToyVariant { abs_sin, signed_sin };

// A solved auxiliary trajectory (eta, etadot) with eta > 0 on its domain.
class EPSolution {
public:
    enum class Source { closed_form_toy, numeric };

    struct Value {
        double eta, etadot;
    };

    Source source() const { return source_; }
    double eta0() const { return eta0_; }
    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }

    Value eval(double t) const;

    // Analytic second derivative; available for the closed form only.
    bool has_analytic_second_derivative() const { return source_ == Source::closed_form_toy; }
    double eta_ddot(double t) const;

    ToyVariant variant() const { return variant_; }
    ToyBranch branch() const { return branch_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    const num::Trajectory& trajectory() const { return traj_; }

    friend EPSolution toy_solution(double, double, ToyBranch, ToyVariant, double, double);
    friend EPSolution ep_integrate(const signals::ParameterSignal&, const signals::ParameterSignal&,
                                   double, double, double, std::pair<double, double>, double);

private:
    EPSolution() = default;

    Source source_ = Source::numeric;
    double eta0_ = 1.0;
    double t0_ = 0.0, t1_ = 0.0;
    double c1_ = 0.0, c2_ = 0.0;
    ToyBranch branch_ = ToyBranch::one_plus;
    ToyVariant variant_ = ToyVariant::signed_sin;
    num::Trajectory traj_;
};

// Closed-form toy solution on [t_lo, t_hi]; positive branches only (the
// stored eta must stay positive). The Ermakov constant is 1 for this
// model. c1 < 1 raises InvalidConstant.
EPSolution toy_solution(double c1, double c2, ToyBranch branch, ToyVariant variant, double t_lo,
                        double t_hi);

// Numerically integrates eta'' + (M0'/M0) eta' + Omega0^2 eta =
// eta0^2/(M0^2 eta^3). Throws CoefficientSingularity if M0 crosses zero
// and BarrierViolation if eta reaches zero.
EPSolution ep_integrate(const signals::ParameterSignal& M0,
                        const signals::ParameterSignal& Omega0_sq, double eta0, double eta_init,
                        double etadot_init, std::pair<double, double> t_span, double tol);

// Equilibrium start (eta, etadot) = (sqrt(eta0/(M0 Omega0)), 0).
std::pair<double, double> default_initial_conditions(const signals::ParameterSignal& M0,
                                                     const signals::ParameterSignal& Omega0_sq,
                                                     double eta0, double t);

// g1 = eta^2, g3 = -M0 eta etadot, g2 = M0^2 etadot^2 + eta0^2/eta^2.
GCoefficients g_from_eta(const EPSolution& sol, const signals::ParameterSignal& M0, double t);

struct GSeries {
    std::vector<double> t;
    std::vector<GCoefficients> g;
    double eta0 = 1.0;
};

GSeries sample_g(const EPSolution& sol, const signals::ParameterSignal& M0, double t_lo,
                 double t_hi, double step);

// Residuals of the coupled rates g1' + (2/M0) g3, g2' - 2 M0 Omega0^2 g3,
// g3' - M0 Omega0^2 g1 + g2/M0, with derivatives taken by central
// differences on the stored grid at the node nearest t.
struct LrResidual {
    double r1 = 0.0, r2 = 0.0, r3 = 0.0;
    double max_abs() const;
};
LrResidual lr_residual(const GSeries& series, const signals::ParameterSignal& M0,
                       const signals::ParameterSignal& Omega0_sq, double t);

// Pointwise defect of the auxiliary equation. Uses the analytic second
// derivative for closed forms, Richardson-extrapolated differences
// otherwise.
double ep_residual(const EPSolution& sol, const signals::ParameterSignal& M0,
                   const signals::ParameterSignal& Omega0_sq, double t);

// Defect evaluated on caller-supplied values; lets tests probe symmetry
// substitutions such as eta -> -eta.
double ep_residual_values(double eta, double etadot, double etaddot, double M0, double M0dot,
                          double Omega0_sq, double eta0);

// Runs the defect test for both toy variants over [t_lo, t_hi] and
// reports which one satisfies the equation smoothly.
struct VariantVerdict {
    ToyVariant smooth;
    double abs_sin_max_residual;
    double signed_sin_max_residual;
};
VariantVerdict select_smooth_variant(double c1, double c2, ToyBranch branch, double t_lo,
                                     double t_hi, int samples = 257);

}  // namespace ptamp::ep
