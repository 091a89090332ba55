#include "ptamp/states.hpp"

#include <algorithm>
#include <cmath>

#include "ptamp/errors.hpp"
#include "ptamp/numerics/hermite.hpp"
#include "ptamp/numerics/quad.hpp"

namespace ptamp::states {

namespace {
constexpr double kPi = 3.14159265358979323846;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}
}  // namespace

cplx mode_g(const ep::GCoefficients& g, double eta0) {
    if (!(g.g1 > 0.0)) throw DomainError("mode_g: g1 must be positive");
    return cplx(eta0, g.g3) / g.g1;
}

HRhoCoeffs h_rho_ladder_coeffs(double eta, double etadot, double M0, double Omega0_sq,
                               double eta0) {
    if (M0 == 0.0) throw DomainError("h_rho_ladder_coeffs: M0 must be nonzero");
    if (!(eta > 0.0)) throw DomainError("h_rho_ladder_coeffs: eta must be positive");
    const double e2 = eta * eta;
    const double omega_rho =
        (eta0 * eta0 + M0 * M0 * Omega0_sq * e2 * e2 + M0 * M0 * e2 * etadot * etadot) /
        (2.0 * eta0 * M0 * e2);
    const cplx alpha_rho = 0.5 * cplx(omega_rho - eta0 / (M0 * e2), -etadot / eta);
    return HRhoCoeffs{omega_rho, alpha_rho};
}

namespace {

cplx arg_scale(cplx g, PhiVariant variant) {
    return variant == PhiVariant::eigen ? cplx(std::sqrt(g.real()), 0.0) : std::sqrt(g);
}

cplx prefactor(int n, cplx g, NormMode mode, PhiVariant variant) {
    const double fall = std::sqrt(std::pow(2.0, n) * factorial(n));
    switch (mode) {
        case NormMode::textbook:
            return std::pow(g / kPi, 0.25) / fall;
        case NormMode::ground_real:
            return std::pow(g.real() / kPi, 0.25) / fall;
        case NormMode::unit:
            return std::pow(g / kPi, 0.25) / fall / std::sqrt(phi_n_norm_sq(n, g, variant));
    }
    return {};
}

}  // namespace

cplx phi_n(int n, double x, cplx g, NormMode mode, PhiVariant variant) {
    if (n < 0) throw InvalidArgument("phi_n: n must be nonnegative");
    if (!(g.real() > 0.0)) throw NonNormalizable("phi_n: Re g must be positive");
    const cplx s = arg_scale(g, variant);
    return prefactor(n, g, mode, variant) * std::exp(-0.5 * g * x * x) *
           num::hermite(n, s * x);
}

double phi_n_norm_sq(int n, cplx g, PhiVariant variant) {
    if (!(g.real() > 0.0)) throw NonNormalizable("phi_n_norm_sq: Re g must be positive");
    const double gr = g.real(), gi = g.imag(), ga = std::abs(g);
    if (variant == PhiVariant::eigen) {
        // |phases| cancel and the real-argument polynomials are exactly
        // orthogonal, leaving the same norm for every level
        return std::sqrt(ga / gr);
    }
    // integral of e^{-gr x^2} H_n(sqrt(g) x) H_n(conj(sqrt(g)) x) via the
    // generating-function expansion; A B = (gi/gr)^2, C = 2|g|/gr
    const double ab = (gi / gr) * (gi / gr);
    const double c = 2.0 * ga / gr;
    double sum = 0.0;
    for (int j = 0; 2 * j <= n; ++j) {
        sum += std::pow(ab, j) * std::pow(c, n - 2 * j) /
               (factorial(j) * factorial(j) * factorial(n - 2 * j));
    }
    const double pref2 = std::sqrt(ga) / (std::sqrt(kPi) * std::pow(2.0, n) * factorial(n));
    return pref2 * std::sqrt(kPi / gr) * factorial(n) * factorial(n) * sum;
}

cplx phi_n_dx(int n, double x, cplx g, NormMode mode, PhiVariant variant) {
    const cplx s = arg_scale(g, variant);
    const cplx h = num::hermite(n, s * x);
    const cplx hd = n > 0 ? 2.0 * static_cast<double>(n) * num::hermite(n - 1, s * x) : cplx(0.0);
    return prefactor(n, g, mode, variant) * std::exp(-0.5 * g * x * x) * (-g * x * h + s * hd);
}

cplx phi_n_dx2(int n, double x, cplx g, NormMode mode, PhiVariant variant) {
    const cplx s = arg_scale(g, variant);
    const cplx h = num::hermite(n, s * x);
    const cplx h1 = n > 0 ? num::hermite(n - 1, s * x) : cplx(0.0);
    const cplx h2 = n > 1 ? num::hermite(n - 2, s * x) : cplx(0.0);
    const double dn = n;
    const cplx core = (g * g * x * x - g) * h - 4.0 * dn * g * x * s * h1 +
                      4.0 * dn * (dn - 1.0) * s * s * h2;
    return prefactor(n, g, mode, variant) * std::exp(-0.5 * g * x * x) * core;
}

cplx phi0_ground(double x, double eta, double etadot, double M0, double eta0) {
    if (!(eta > 0.0)) throw DomainError("phi0_ground: eta must be positive");
    if (!(eta0 > 0.0)) throw NonNormalizable("phi0_ground: eta0 must be positive");
    const double pref = std::pow(eta0 / kPi, 0.25) / std::sqrt(eta);
    const cplx expo = cplx(eta0, -M0 * eta * etadot) * (x * x) / (2.0 * eta * eta);
    return pref * std::exp(-expo);
}

double invariant_action_residual(int n, const ep::GCoefficients& g, double eta0, double x,
                                 NormMode mode, PhiVariant variant) {
    const cplx gm = mode_g(g, eta0);
    const cplx f = phi_n(n, x, gm, mode, variant);
    const cplx fx = phi_n_dx(n, x, gm, mode, variant);
    const cplx fxx = phi_n_dx2(n, x, gm, mode, variant);
    // p^2 -> -d2/dx2, {x,p} -> -i (2 x d/dx + 1)
    const cplx action = -g.g1 * fxx + g.g2 * x * x * f - cplx(0, 1) * g.g3 * (2.0 * x * fx + f);
    return std::abs(action - 2.0 * eta0 * (n + 0.5) * f);
}

double dynamical_phase(int n, const std::function<double(double)>& omega_rho, double t0, double t,
                       double tol) {
    if (t == t0) return 0.0;
    return -(n + 0.5) * num::quad(omega_rho, t0, t, tol);
}

cplx geometric_rate_textbook(int n, cplx g, cplx gdot, double g1) {
    cplx rate = cplx(0, 1) * gdot / (4.0 * g) - cplx(0, 1) * (n + 0.5) * gdot * g1 / 2.0;
    if (n > 0) rate += static_cast<double>(n) * gdot * std::sqrt(g1 / (2.0 * g));
    return rate;
}

double geometric_rate_im_textbook(int n, const ep::GCoefficients& g, double g1_dot, double g2_dot,
                                 double g3_dot) {
    const double rg = std::sqrt(g.g1 * g.g2);
    if (rg < 1.0 - 1e-12)
        throw ParameterDomainError("geometric_rate_im_textbook: r_g must be >= 1");
    const double rp = std::sqrt(1.0 + 1.0 / rg);
    const double rm = std::sqrt(std::max(0.0, 1.0 - 1.0 / rg));
    const double eta = std::sqrt(g.g1);
    return n / (2.0 * std::sqrt(g.g1)) * (g3_dot * rp / rg - g1_dot * g.g2 * rm) * eta +
           0.125 * (g2_dot / g.g2 - g1_dot / g.g1) + 0.5 * (n + 0.5) * g1_dot / g.g1;
}

double geometric_phase_im(int n, const ep::GSeries& series, double t) {
    const auto& ts = series.t;
    if (ts.size() < 3) throw InvalidArgument("geometric_phase_im: need at least three samples");
    // integrate the central-difference rate with the trapezoid rule up to
    // the node nearest t
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t end = static_cast<std::size_t>(it - ts.begin());
    if (end > 0 && (end == ts.size() || std::abs(ts[end - 1] - t) < std::abs(ts[end] - t))) --end;
    end = std::min(end, ts.size() - 1);

    auto rate_at = [&](std::size_t i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i == ts.size() - 1 ? i : i + 1;
        const double dt = ts[hi] - ts[lo];
        const double g1d = (series.g[hi].g1 - series.g[lo].g1) / dt;
        const double g2d = (series.g[hi].g2 - series.g[lo].g2) / dt;
        const double g3d = (series.g[hi].g3 - series.g[lo].g3) / dt;
        return geometric_rate_im_textbook(n, series.g[i], g1d, g2d, g3d);
    };

    double acc = 0.0;
    double prev_rate = rate_at(0);
    for (std::size_t i = 1; i <= end; ++i) {
        const double rate = rate_at(i);
        acc += 0.5 * (rate + prev_rate) * (ts[i] - ts[i - 1]);
        prev_rate = rate;
    }
    return acc;
}

double geometric_phase_im_closed0(const ep::GSeries& series, double t) {
    if (series.t.empty()) throw InvalidArgument("geometric_phase_im_closed0: empty series");
    const auto& g0 = series.g.front();
    // locate g at t by nearest node
    auto it = std::lower_bound(series.t.begin(), series.t.end(), t);
    std::size_t i = static_cast<std::size_t>(it - series.t.begin());
    if (i > 0 &&
        (i == series.t.size() || std::abs(series.t[i - 1] - t) < std::abs(series.t[i] - t)))
        --i;
    i = std::min(i, series.t.size() - 1);
    const auto& g = series.g[i];
    return 0.125 * std::log((g.g1 * g.g2) / (g0.g1 * g0.g2));
}

Covariance2 covariance(int n, const ep::GCoefficients& g, double theta_im, double M0,
                       double etadot, double eta) {
    (void)eta;
    const double damp = (2.0 * n + 1.0) * std::exp(-2.0 * theta_im);
    return Covariance2{0.5 * g.g1 * damp, 0.5 * g.g2 * damp, 0.5 * M0 * etadot * damp};
}

Covariance2 covariance_physical(int n, const ep::GCoefficients& g) {
    const double scale = (2.0 * n + 1.0) * 0.5;
    return Covariance2{scale * g.g1, scale * g.g2, -scale * g.g3};
}

RsupVerdict rsup_check(const Covariance2& v) {
    if (!(v.V11 > 0.0) || !(v.V22 > 0.0))
        throw InvalidArgument("rsup_check: variances must be positive");
    const double margin = v.det() - 0.25;
    return RsupVerdict{margin >= -1e-12, margin};
}

RsupVerdict rsup_eta_form(double M0, double eta, double etadot) {
    const double q = M0 * M0 * eta * eta * etadot * etadot;
    const double margin = 1.0 + q - M0 * M0 * etadot * etadot - std::sqrt(1.0 + q);
    return RsupVerdict{margin >= -1e-12, margin};
}

}  // namespace ptamp::states
