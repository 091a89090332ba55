#include "ptamp/pipeline.hpp"

#include <cmath>

#include "ptamp/errors.hpp"
#include "ptamp/numerics/quad.hpp"

namespace ptamp::states {

ModeSeries::ModeSeries(ep::EPSolution sol, signals::ParameterSignal M0,
                       signals::ParameterSignal Omega0_sq)
    : sol_(std::move(sol)), M0_(std::move(M0)), Om0sq_(std::move(Omega0_sq)) {}

ep::GCoefficients ModeSeries::g(double t) const {
    return ep::g_from_eta(sol_, M0_, t);
}

ep::GCoefficients ModeSeries::g_rates(double t) const {
    const auto gc = g(t);
    const double m = M0_(t);
    const double w2 = Om0sq_(t);
    return ep::GCoefficients{-2.0 * gc.g3 / m, 2.0 * m * w2 * gc.g3, m * w2 * gc.g1 - gc.g2 / m};
}

cplx ModeSeries::gmode(double t) const {
    return mode_g(g(t), sol_.eta0());
}

cplx ModeSeries::gmode_rate(double t) const {
    const auto gc = g(t);
    const auto gd = g_rates(t);
    // d/dt (eta0 + i g3)/g1
    return (cplx(0.0, gd.g3) * gc.g1 - cplx(sol_.eta0(), gc.g3) * gd.g1) / (gc.g1 * gc.g1);
}

double ModeSeries::omega_rho(double t) const {
    const auto v = sol_.eval(t);
    return h_rho_ladder_coeffs(v.eta, v.etadot, M0_(t), Om0sq_(t), sol_.eta0()).omega_rho;
}

ModeState ModeSeries::at(double t) const {
    const auto v = sol_.eval(t);
    const double m = M0_(t);
    const double w2 = Om0sq_(t);
    const auto h = h_rho_ladder_coeffs(v.eta, v.etadot, m, w2, sol_.eta0());
    ModeState s;
    s.t = t;
    s.eta = v.eta;
    s.etadot = v.etadot;
    s.M0 = m;
    s.Omega0_sq = w2;
    s.g = g(t);
    s.gmode = mode_g(s.g, sol_.eta0());
    s.omega_rho = h.omega_rho;
    s.alpha_rho = h.alpha_rho;
    return s;
}

double ModeSeries::theta_d(int n, double t, double tol) const {
    return dynamical_phase(n, [this](double tau) { return omega_rho(tau); }, t_begin(), t, tol);
}

cplx ModeSeries::theta_g(int n, double t, double tol) const {
    if (t == t_begin()) return {};
    return num::quad_complex(
        [this, n](double tau) {
            return geometric_rate_textbook(n, gmode(tau), gmode_rate(tau), g(tau).g1);
        },
        t_begin(), t, tol);
}

double ModeSeries::theta_g_im_closed0(double t) const {
    const auto g0 = g(t_begin());
    const auto gt = g(t);
    return 0.125 * std::log((gt.g1 * gt.g2) / (g0.g1 * g0.g2));
}

PhaseTrajectory ModeSeries::phase_trajectory(int n, const std::vector<double>& times) const {
    PhaseTrajectory out;
    out.n = n;
    out.t = times;
    out.theta_d.reserve(times.size());
    out.theta_g_im.reserve(times.size());
    for (double t : times) {
        out.theta_d.push_back(theta_d(n, t));
        out.theta_g_im.push_back(theta_g(n, t).imag());
    }
    return out;
}

ep::GSeries ModeSeries::sample_g(double t_lo, double t_hi, double step) const {
    return ep::sample_g(sol_, M0_, t_lo, t_hi, step);
}

ModeSeries toy_pipeline(double c1, double c2, ep::ToyBranch branch, ep::ToyVariant variant,
                        double t_lo, double t_hi) {
    return ModeSeries(ep::toy_solution(c1, c2, branch, variant, t_lo, t_hi),
                      signals::ParameterSignal::toy_power(1.0, 1.0),
                      signals::ParameterSignal::toy_power(1.0, -2.0));
}

cplx geometric_rate_oracle(int n, const ModeSeries& series, double t, double quad_tol) {
    const double h = 1e-5 * std::max(std::abs(t), 1.0);
    // the textbook family: the rate formulas under test were derived for it
    auto phi = [&](double tau, double x) {
        return phi_n(n, x, series.gmode(tau), NormMode::textbook, PhiVariant::textbook);
    };

    const cplx g_now = series.gmode(t);
    const double gr = g_now.real();
    const double sigma = std::sqrt(std::max(1.0 / (2.0 * gr), 1.0));
    const double L = 10.0 * sigma * std::sqrt(1.0 + n);

    auto dphi_dt = [&](double x) {
        const cplx d1 = (phi(t + h, x) - phi(t - h, x)) / (2.0 * h);
        const cplx d2 = (phi(t + h / 2.0, x) - phi(t - h / 2.0, x)) / h;
        return (4.0 * d2 - d1) / 3.0;
    };
    const cplx num_int = num::quad_complex(
        [&](double x) { return std::conj(phi(t, x)) * dphi_dt(x); }, -L, L, quad_tol);
    const cplx den_int = num::quad_complex(
        [&](double x) { return std::conj(phi(t, x)) * phi(t, x); }, -L, L, quad_tol);
    return cplx(0, 1) * num_int / den_int;
}

cplx geometric_phase_oracle(int n, const ModeSeries& series, double t, double tol) {
    if (t == series.t_begin()) return {};
    return num::quad_complex(
        [&](double tau) { return geometric_rate_oracle(n, series, tau); }, series.t_begin(), t,
        tol);
}

PsiAssembler::PsiAssembler(const ModeSeries& series, std::vector<cplx> coeffs,
                           AmplitudeRoute route)
    : series_(series), coeffs_(std::move(coeffs)), route_(route) {
    if (coeffs_.empty()) throw InvalidArgument("PsiAssembler: need at least one coefficient");
}

double PsiAssembler::textbook_integral_rate(double t) const {
    const auto gc = series_.g(t);
    const auto gd = series_.g_rates(t);
    const double rg = std::sqrt(gc.g1 * gc.g2);
    const double rp = std::sqrt(1.0 + 1.0 / rg);
    const double rm = std::sqrt(std::max(0.0, 1.0 - 1.0 / rg));
    return gd.g3 * rp / rg - gd.g1 * gc.g2 * rm;
}

PsiAssembler::Phases PsiAssembler::phases_at(double t, double tol) const {
    Phases ph;
    ph.t = t;
    ph.theta.resize(coeffs_.size());
    ph.textbook_amp.assign(coeffs_.size(), 1.0);
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
        if (coeffs_[n] == cplx(0.0)) continue;
        const int ni = static_cast<int>(n);
        const cplx tg = series_.theta_g(ni, t, tol);
        ph.theta[n] = cplx(series_.theta_d(ni, t, tol), 0.0) + tg;
        if (route_ == AmplitudeRoute::textbook_prefactor) {
            const auto st = series_.at(t);
            double integral = 0.0;
            if (t != series_.t_begin() && ni > 0)
                integral = num::quad(
                    [this](double tau) { return textbook_integral_rate(tau); },
                    series_.t_begin(), t, tol);
            const double damp = 1.0 + st.M0 * st.M0 * st.eta * st.eta * st.etadot * st.etadot;
            ph.textbook_amp[n] = std::exp(-ni * integral) /
                                (std::pow(st.eta, 2.0 * ni) * std::pow(damp, 0.25));
        }
    }
    return ph;
}

PsiAssembler::Phases PsiAssembler::advance(const Phases& base, double dt) const {
    Phases ph = base;
    ph.t = base.t + dt;
    if (dt == 0.0) return ph;
    const double a = std::min(base.t, ph.t), b = std::max(base.t, ph.t);
    const double sgn = dt > 0.0 ? 1.0 : -1.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
        if (coeffs_[n] == cplx(0.0)) continue;
        const int ni = static_cast<int>(n);
        const cplx dg = num::quad_complex(
            [this, ni](double tau) {
                return geometric_rate_textbook(ni, series_.gmode(tau), series_.gmode_rate(tau),
                                              series_.g(tau).g1);
            },
            a, b, 1e-14);
        const double dd = num::quad([this](double tau) { return series_.omega_rho(tau); }, a, b,
                                    1e-14);
        ph.theta[n] += sgn * (dg + cplx(-(ni + 0.5) * dd, 0.0));
        if (route_ == AmplitudeRoute::textbook_prefactor) {
            const auto st = series_.at(ph.t);
            double integral = 0.0;
            if (ni > 0)
                integral = num::quad(
                    [this](double tau) { return textbook_integral_rate(tau); },
                    series_.t_begin(), ph.t, 1e-12);
            const double damp = 1.0 + st.M0 * st.M0 * st.eta * st.eta * st.etadot * st.etadot;
            ph.textbook_amp[n] = std::exp(-ni * integral) /
                                (std::pow(st.eta, 2.0 * ni) * std::pow(damp, 0.25));
        }
    }
    return ph;
}

cplx PsiAssembler::psi(double x, const Phases& ph) const {
    const cplx g = series_.gmode(ph.t);
    cplx acc = 0.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
        if (coeffs_[n] == cplx(0.0)) continue;
        const cplx phi =
            phi_n(static_cast<int>(n), x, g, NormMode::textbook, PhiVariant::textbook);
        if (route_ == AmplitudeRoute::integrated_phase) {
            acc += coeffs_[n] * std::exp(cplx(0, 1) * ph.theta[n]) * phi;
        } else {
            const cplx osc = std::exp(cplx(0, 1) * ph.theta[n].real());
            acc += coeffs_[n] * osc * ph.textbook_amp[n] * phi;
        }
    }
    return acc;
}

cplx PsiAssembler::psi(double x, double t) {
    auto it = cache_.find(t);
    if (it == cache_.end()) it = cache_.emplace(t, phases_at(t)).first;
    return psi(x, it->second);
}

double PsiAssembler::amplitude_deviation(double t) const {
    const Phases ph = phases_at(t);
    PsiAssembler textbook(series_, coeffs_, AmplitudeRoute::textbook_prefactor);
    const Phases php = textbook.phases_at(t);
    double worst = 0.0;
    for (std::size_t n = 0; n < coeffs_.size(); ++n) {
        if (coeffs_[n] == cplx(0.0)) continue;
        const double integrated = std::exp(-ph.theta[n].imag());
        worst = std::max(worst, std::abs(php.textbook_amp[n] / integrated - 1.0));
    }
    return worst;
}

}  // namespace ptamp::states
