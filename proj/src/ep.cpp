#include "ptamp/ep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "ptamp/errors.hpp"

namespace ptamp::ep {

namespace {

struct ToyTerms {
    double phase, sin_phase, cos_phase, k;
};

ToyTerms toy_terms(double c1, double c2, double t) {
    if (c1 < 1.0) throw InvalidConstant("toy_eta: c1 must be >= 1");
    if (!(t > 0.0)) throw InvalidArgument("toy_eta: t must be positive");
    const double phase = 2.0 * c2 - 2.0 * std::log(t);
    return ToyTerms{phase, std::sin(phase), std::cos(phase), std::sqrt(c1 * c1 - 1.0)};
}

ToyEtaValue toy_eval(double c1, double c2, ToyBranch branch, double t, bool smooth) {
    const ToyTerms tt = toy_terms(c1, c2, t);
    const double inner = toy_branch_inner_sign(branch);
    const double overall = toy_branch_positive(branch) ? 1.0 : -1.0;

    double osc, osc_rate_factor;  // w = c1 + inner*k*osc, dw/dt = inner*k*osc_rate_factor*(-2/t)
    bool kink = false;
    if (smooth) {
        osc = tt.sin_phase;
        osc_rate_factor = tt.cos_phase;
    } else {
        osc = std::abs(tt.sin_phase);
        double sgn = tt.sin_phase >= 0.0 ? 1.0 : -1.0;
        if (std::abs(tt.sin_phase) < 1e-12) {
            kink = true;
            // limit from above in t: the phase decreases, so take the sign
            // of the sine just below the current phase
            sgn = std::sin(tt.phase - 1e-9) >= 0.0 ? 1.0 : -1.0;
        }
        osc_rate_factor = sgn * tt.cos_phase;
    }
    const double w = c1 + inner * tt.k * osc;
    if (!(w > 0.0)) throw DomainError("toy_eta: eta^2 not positive");
    const double eta = overall * std::sqrt(w);
    const double wdot = inner * tt.k * osc_rate_factor * (-2.0 / t);
    return ToyEtaValue{eta, wdot / (2.0 * eta), kink};
}

}  // namespace

ToyEtaValue toy_eta(double c1, double c2, ToyBranch branch, double t) {
    return toy_eval(c1, c2, branch, t, false);
}

ToyEtaValue toy_eta_smooth(double c1, double c2, ToyBranch branch, double t) {
    return toy_eval(c1, c2, branch, t, true);
}

EPSolution::Value EPSolution::eval(double t) const {
    if (source_ == Source::closed_form_toy) {
        const ToyEtaValue v = variant_ == ToyVariant::signed_sin
                                  ? toy_eta_smooth(c1_, c2_, branch_, t)
                                  : toy_eta(c1_, c2_, branch_, t);
        return Value{v.eta, v.etadot};
    }
    const auto y = traj_.eval(t);
    return Value{y[0], y[1]};
}

double EPSolution::eta_ddot(double t) const {
    if (source_ != Source::closed_form_toy)
        throw InvalidArgument("EPSolution: analytic second derivative only for the closed form");
    const ToyTerms tt = toy_terms(c1_, c2_, t);
    const double inner = toy_branch_inner_sign(branch_);
    double S = tt.sin_phase, C = tt.cos_phase;
    if (variant_ == ToyVariant::abs_sin) {
        const double sgn = std::abs(S) < 1e-12 ? (std::sin(tt.phase - 1e-9) >= 0.0 ? 1.0 : -1.0)
                                               : (S >= 0.0 ? 1.0 : -1.0);
        S = sgn * S;
        C = sgn * C;
    }
    const Value v = eval(t);
    // w = eta^2: wdot = -2 k C / t, wddot = 2k(C - 2S)/t^2 (signs folded above)
    const double wdd = inner * tt.k * (2.0 * C - 4.0 * S) / (t * t);
    return wdd / (2.0 * v.eta) - v.etadot * v.etadot / v.eta;
}

EPSolution toy_solution(double c1, double c2, ToyBranch branch, ToyVariant variant, double t_lo,
                        double t_hi) {
    if (!toy_branch_positive(branch))
        throw DomainError("toy_solution: stored solutions must keep eta positive");
    if (!(t_lo > 0.0 && t_hi > t_lo)) throw InvalidArgument("toy_solution: need 0 < t_lo < t_hi");
    toy_terms(c1, c2, t_lo);  // validates c1
    EPSolution sol;
    sol.source_ = EPSolution::Source::closed_form_toy;
    sol.eta0_ = 1.0;
    sol.t0_ = t_lo;
    sol.t1_ = t_hi;
    sol.c1_ = c1;
    sol.c2_ = c2;
    sol.branch_ = branch;
    sol.variant_ = variant;
    return sol;
}

EPSolution ep_integrate(const signals::ParameterSignal& M0,
                        const signals::ParameterSignal& Omega0_sq, double eta0, double eta_init,
                        double etadot_init, std::pair<double, double> t_span, double tol) {
    if (!(eta_init > 0.0)) throw InvalidArgument("ep_integrate: eta_init must be positive");

    const double m_start = M0(t_span.first);
    const double m_scale = std::max(std::abs(m_start), 1e-12);
    auto rhs = [&](double t, std::span<const double> y, std::span<double> dydt) {
        const double m = M0(t);
        if (!(std::abs(m) > 1e-8 * m_scale) || (m > 0.0) != (m_start > 0.0)) {
            std::ostringstream msg;
            msg << "ep_integrate: effective mass crosses zero near t=" << t;
            throw CoefficientSingularity(msg.str());
        }
        const double eta = y[0];
        if (!(eta > 0.0)) {
            std::ostringstream msg;
            msg << "ep_integrate: eta reached zero near t=" << t
                << " (tolerance likely too loose)";
            throw BarrierViolation(msg.str());
        }
        const double mdot = M0.derivative(t);
        dydt[0] = y[1];
        dydt[1] = -(mdot / m) * y[1] - Omega0_sq(t) * eta + eta0 * eta0 / (m * m * eta * eta * eta);
    };

    const std::array<double, 2> y0{eta_init, etadot_init};
    EPSolution sol;
    sol.source_ = EPSolution::Source::numeric;
    sol.eta0_ = eta0;
    sol.t0_ = t_span.first;
    sol.t1_ = t_span.second;
    try {
        sol.traj_ = num::integrate_ode(rhs, y0, t_span, tol, tol * 1e-2);
    } catch (const SingularityError& e) {
        // a step-size collapse right where the mass vanishes is the same
        // coefficient singularity, reported uniformly
        if (std::abs(M0(e.reached_time)) < 1e-3 * m_scale) {
            std::ostringstream msg;
            msg << "ep_integrate: effective mass crosses zero near t=" << e.reached_time;
            throw CoefficientSingularity(msg.str());
        }
        throw;
    }
    return sol;
}

std::pair<double, double> default_initial_conditions(const signals::ParameterSignal& M0,
                                                     const signals::ParameterSignal& Omega0_sq,
                                                     double eta0, double t) {
    const double om2 = Omega0_sq(t);
    if (!(om2 > 0.0))
        throw DomainError("default_initial_conditions: Omega0^2 must be positive at the start");
    return {std::sqrt(eta0 / (M0(t) * std::sqrt(om2))), 0.0};
}

GCoefficients g_from_eta(const EPSolution& sol, const signals::ParameterSignal& M0, double t) {
    const auto v = sol.eval(t);
    const double m = M0(t);
    const double e0 = sol.eta0();
    return GCoefficients{v.eta * v.eta, m * m * v.etadot * v.etadot + e0 * e0 / (v.eta * v.eta),
                         -m * v.eta * v.etadot};
}

GSeries sample_g(const EPSolution& sol, const signals::ParameterSignal& M0, double t_lo,
                 double t_hi, double step) {
    if (!(step > 0.0) || !(t_hi > t_lo)) throw InvalidArgument("sample_g: bad window");
    GSeries out;
    out.eta0 = sol.eta0();
    const auto n = static_cast<std::size_t>(std::floor((t_hi - t_lo) / step + 0.5)) + 1;
    out.t.reserve(n);
    out.g.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t_lo + static_cast<double>(i) * step;
        if (t > t_hi + step * 1e-9) break;
        out.t.push_back(t);
        out.g.push_back(g_from_eta(sol, M0, t));
    }
    return out;
}

double LrResidual::max_abs() const {
    return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

LrResidual lr_residual(const GSeries& series, const signals::ParameterSignal& M0,
                       const signals::ParameterSignal& Omega0_sq, double t) {
    const auto& ts = series.t;
    if (ts.size() < 3) throw InvalidArgument("lr_residual: need at least three samples");
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    if (i == 0) i = 1;
    if (i >= ts.size() - 1) i = ts.size() - 2;
    if (i > 0 && i + 1 < ts.size() && std::abs(ts[i - 1] - t) < std::abs(ts[i] - t)) --i;
    i = std::clamp<std::size_t>(i, 1, ts.size() - 2);

    const double h2 = ts[i + 1] - ts[i - 1];
    const GCoefficients& gp = series.g[i + 1];
    const GCoefficients& gm = series.g[i - 1];
    const GCoefficients& g = series.g[i];
    const double g1d = (gp.g1 - gm.g1) / h2;
    const double g2d = (gp.g2 - gm.g2) / h2;
    const double g3d = (gp.g3 - gm.g3) / h2;
    const double m = M0(ts[i]);
    const double w2 = Omega0_sq(ts[i]);
    return LrResidual{g1d + (2.0 / m) * g.g3, g2d - 2.0 * m * w2 * g.g3,
                      g3d - m * w2 * g.g1 + g.g2 / m};
}

double ep_residual_values(double eta, double etadot, double etaddot, double M0, double M0dot,
                          double Omega0_sq, double eta0) {
    return etaddot + (M0dot / M0) * etadot + Omega0_sq * eta -
           eta0 * eta0 / (M0 * M0 * eta * eta * eta);
}

double ep_residual(const EPSolution& sol, const signals::ParameterSignal& M0,
                   const signals::ParameterSignal& Omega0_sq, double t) {
    if (sol.has_analytic_second_derivative()) {
        const auto v = sol.eval(t);
        return ep_residual_values(v.eta, v.etadot, sol.eta_ddot(t), M0(t), M0.derivative(t),
                                  Omega0_sq(t), sol.eta0());
    }
    // difference stencil; recentered so the probes stay inside the grid
    const double h = 1e-4 * std::max(std::abs(t), 1.0);
    const double tc = std::clamp(t, sol.t_begin() + 2.0 * h, sol.t_end() - 2.0 * h);
    const auto v = sol.eval(tc);
    auto second = [&](double hh) {
        return (sol.eval(tc + hh).eta - 2.0 * v.eta + sol.eval(tc - hh).eta) / (hh * hh);
    };
    const double d1 = second(h), d2 = second(h / 2.0);
    const double edd = (4.0 * d2 - d1) / 3.0;
    return ep_residual_values(v.eta, v.etadot, edd, M0(tc), M0.derivative(tc), Omega0_sq(tc),
                              sol.eta0());
}

VariantVerdict select_smooth_variant(double c1, double c2, ToyBranch branch, double t_lo,
                                     double t_hi, int samples) {
    const auto m0 = signals::ParameterSignal::toy_power(1.0, 1.0);
    const auto w2 = signals::ParameterSignal::toy_power(1.0, -2.0);
    const EPSolution abs_sol = toy_solution(c1, c2, branch, ToyVariant::abs_sin, t_lo, t_hi);
    const EPSolution sgn_sol = toy_solution(c1, c2, branch, ToyVariant::signed_sin, t_lo, t_hi);
    double worst_abs = 0.0, worst_sgn = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / samples;
        worst_abs = std::max(worst_abs, std::abs(ep_residual(abs_sol, m0, w2, t)));
        worst_sgn = std::max(worst_sgn, std::abs(ep_residual(sgn_sol, m0, w2, t)));
    }
    // Each piece of the |sin| form solves the equation, so a pointwise
    // defect misses its kinks; charge the first-derivative jump at every
    // sine zero inside the window instead.
    auto kink_jump = [&](const EPSolution& sol) {
        double worst = 0.0;
        const double pi = 3.14159265358979323846;
        // zeros of sin(2 c2 - 2 ln t): t = exp(c2 - m pi/2)
        const int m_hi = static_cast<int>(std::floor(2.0 * (c2 - std::log(t_lo)) / pi));
        const int m_lo = static_cast<int>(std::ceil(2.0 * (c2 - std::log(t_hi)) / pi));
        for (int m = m_lo; m <= m_hi; ++m) {
            const double tk = std::exp(c2 - 0.5 * pi * m);
            if (tk <= t_lo || tk >= t_hi) continue;
            const double h = 1e-7 * tk;
            worst = std::max(worst,
                             std::abs(sol.eval(tk + h).etadot - sol.eval(tk - h).etadot));
        }
        return worst;
    };
    worst_abs = std::max(worst_abs, kink_jump(abs_sol));
    worst_sgn = std::max(worst_sgn, kink_jump(sgn_sol));
    return VariantVerdict{worst_sgn <= worst_abs ? ToyVariant::signed_sin : ToyVariant::abs_sin,
                          worst_abs, worst_sgn};
}

}  // namespace ptamp::ep
