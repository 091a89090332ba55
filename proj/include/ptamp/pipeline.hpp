#pragma once

#include <map>
#include <vector>

#include "ptamp/states.hpp"

namespace ptamp::states {

// Per-time bundle of everything the state layer consumes.
struct ModeState {
    double t = 0.0;
    double eta = 0.0, etadot = 0.0;
    double M0 = 0.0, Omega0_sq = 0.0;
    ep::GCoefficients g;
    cplx gmode;
    double omega_rho = 0.0;
    cplx alpha_rho;
};

// Evaluates the solved pipeline (auxiliary solution + oscillator
// signals) at arbitrary times; exact for closed-form solutions, dense
// interpolation for numeric ones. Rates of the g-coefficients come from
// the coupled equations, not finite differences.
class ModeSeries {
public:
    ModeSeries(ep::EPSolution sol, signals::ParameterSignal M0, signals::ParameterSignal Omega0_sq);

    double t_begin() const { return sol_.t_begin(); }
    double t_end() const { return sol_.t_end(); }
    double eta0() const { return sol_.eta0(); }
    const ep::EPSolution& solution() const { return sol_; }
    const signals::ParameterSignal& M0_signal() const { return M0_; }
    const signals::ParameterSignal& Omega0_sq_signal() const { return Om0sq_; }

    ModeState at(double t) const;
    ep::GCoefficients g(double t) const;
    // g1', g2', g3' from g1' = -2 g3/M0, g2' = 2 M0 Om0^2 g3,
    // g3' = M0 Om0^2 g1 - g2/M0.
    ep::GCoefficients g_rates(double t) const;
    cplx gmode(double t) const;
    cplx gmode_rate(double t) const;
    double omega_rho(double t) const;

    // Phases measured from t_begin. theta_g is the integrated complex
    // textbook rate; its imaginary part damps the amplitude.
    double theta_d(int n, double t, double tol = 1e-11) const;
    cplx theta_g(int n, double t, double tol = 1e-11) const;
    double theta_g_im_closed0(double t) const;

    PhaseTrajectory phase_trajectory(int n, const std::vector<double>& times) const;

    ep::GSeries sample_g(double t_lo, double t_hi, double step) const;

private:
    ep::EPSolution sol_;
    signals::ParameterSignal M0_;
    signals::ParameterSignal Om0sq_;
};

// The power-law model M0 = eta0 t, Omega0 = eta0/t with its closed-form
// auxiliary solution.
ModeSeries toy_pipeline(double c1, double c2, ep::ToyBranch branch,
                        ep::ToyVariant variant = ep::ToyVariant::signed_sin, double t_lo = 1.0,
                        double t_hi = 10.0);

// Brute-force level-n geometric rate i <n|d/dt|n> / <n|n> at time t:
// Richardson central differences in t of the textbook-convention phi_n and
// adaptive spatial quadrature. The ratio removes the norm drift of the
// non-normalized family.
cplx geometric_rate_oracle(int n, const ModeSeries& series, double t, double quad_tol = 1e-10);

// The same rate integrated from t_begin to t.
cplx geometric_phase_oracle(int n, const ModeSeries& series, double t, double tol = 1e-7);

enum class AmplitudeRoute {
    integrated_phase,   // amplitude from exp(-Im theta_n); solves the PDE
    textbook_prefactor,  // e^{-n int(...)} / (eta^{2n} (1+M0^2 eta^2 etadot^2)^{1/4})
};

// Superposition sum c_n e^{i theta_n(t)} phi_n(x, t) over the nonzero
// coefficients. Phase integrals are cached per prepared time.
class PsiAssembler {
public:
    PsiAssembler(const ModeSeries& series, std::vector<cplx> coeffs,
                 AmplitudeRoute route = AmplitudeRoute::integrated_phase);

    struct Phases {
        double t;
        std::vector<cplx> theta;      // per coefficient index
        std::vector<double> textbook_amp;  // textbook-route amplitude factors
    };

    Phases phases_at(double t, double tol = 1e-12) const;
    // Advance phases across a short interval by a single quadrature panel;
    // used for tight finite-difference probes in t.
    Phases advance(const Phases& base, double dt) const;

    cplx psi(double x, const Phases& ph) const;
    cplx psi(double x, double t);

    // Relative disagreement between the textbook amplitude factor and
    // exp(-Im theta_n) at t, maximized over the included levels.
    double amplitude_deviation(double t) const;

    const ModeSeries& series() const { return series_; }

private:
    double textbook_integral_rate(double t) const;

    const ModeSeries& series_;
    std::vector<cplx> coeffs_;
    AmplitudeRoute route_;
    std::map<double, Phases> cache_;
};

}  // namespace ptamp::states
