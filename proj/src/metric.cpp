#include "ptamp/metric.hpp"

#include <cmath>
#include <sstream>

#include "ptamp/errors.hpp"
#include "ptamp/numerics/roots.hpp"

namespace ptamp::metric {

using num::Mat3;

MetricParams MetricParams::from_kappa(double kappa, double kappa0) {
    const double disc = kappa0 * kappa0 - 4.0 * kappa * kappa;
    if (!(disc > 0.0))
        throw InvalidArgument("MetricParams: kappa0^2 must exceed 4 kappa^2");
    return MetricParams{kappa, kappa0, std::sqrt(disc), false};
}

Mat3 k_generator(double kappa0, double kappa) {
    const double k = kappa;
    return Mat3::from_rows({0.0, -4.0 * k, 4.0 * k}, {2.0 * k, -2.0 * kappa0, 0.0},
                           {-2.0 * k, 0.0, 2.0 * kappa0});
}

namespace {

double sinhc(double x) {  // sinh(x)/x
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 * (1.0 + x2 / 20.0);
    }
    return std::sinh(x) / x;
}

}  // namespace

Mat3 k_matrix_closed(const MetricParams& p) {
    if (p.identity) return Mat3::identity();
    const double k = p.kappa, k0 = p.kappa0, th = p.theta;
    if (!(th > 0.0) && !(k == 0.0 && k0 == 0.0))
        throw InvalidArgument("k_matrix_closed: theta must be positive");

    // Entries such as (kappa0 - kappa0 cosh 2th + th sinh 2th)/th^2 are
    // rewritten with cosh 2th - 1 = 2 sinh^2 th, leaving products of
    // r = sinh(th)/th that stay finite as th -> 0.
    const double r = sinhc(th);
    const double ch = std::cosh(th);
    const double k11 = 1.0 - 8.0 * k * k * r * r;
    const double k12 = -4.0 * k * r * (ch - k0 * r);
    const double k13 = 4.0 * k * r * (ch + k0 * r);
    const double k21 = 2.0 * k * r * (ch - k0 * r);
    const double k23 = 4.0 * k * k * r * r;
    const double k22 = 1.0 + 2.0 * r * ((k0 * k0 - 2.0 * k * k) * r - k0 * ch);
    const double k31 = -2.0 * k * r * (ch + k0 * r);
    const double k32 = k23;
    const double k33 = 1.0 + 2.0 * r * ((k0 * k0 - 2.0 * k * k) * r + k0 * ch);
    return Mat3::from_rows({k11, k12, k13}, {k21, k22, k23}, {k31, k32, k33});
}

Mat3 k_matrix_raw(double kappa0, double kappa) {
    const double k = kappa, k0 = kappa0;
    const double th2 = k0 * k0 - 4.0 * k * k;
    if (!(th2 > 0.0)) throw InvalidArgument("k_matrix_raw: theta must be real");
    const double th = std::sqrt(th2);
    const double c = std::cosh(2.0 * th), s = std::sinh(2.0 * th);
    return Mat3::from_rows({(k0 * k0 - 4.0 * k * k * c) / th2, -2.0 * k * (k0 - k0 * c + th * s) / th2,
                            -2.0 * k * (k0 - k0 * c - th * s) / th2},
                           {k * (k0 - k0 * c + th * s) / th2,
                            (-2.0 * k * k + (k0 * k0 - 2.0 * k * k) * c - k0 * th * s) / th2,
                            2.0 * k * k * (c - 1.0) / th2},
                           {k * (k0 - k0 * c - th * s) / th2, 2.0 * k * k * (c - 1.0) / th2,
                            (-2.0 * k * k + (k0 * k0 - 2.0 * k * k) * c + k0 * th * s) / th2});
}

std::function<double(double)> kappa0_constraint(const signals::AmplifierSpec& spec, double kappa,
                                                double t) {
    const double om = spec.omega(t);
    const double al = spec.alpha(t);
    const double be = spec.beta(t);
    return [om, al, be, kappa](double kappa0) {
        const double th2 = kappa0 * kappa0 - 4.0 * kappa * kappa;
        if (!(th2 > 0.0)) throw InvalidArgument("kappa0_constraint: kappa0 <= 2|kappa|");
        const double th = std::sqrt(th2);
        const double denom = 2.0 * om * kappa - (al + be) * kappa0;
        return std::tanh(2.0 * th) / th - (be - al) / denom;
    };
}

std::optional<double> kappa0_pole(const signals::AmplifierSpec& spec, double kappa, double t) {
    const double nu_p = spec.alpha(t) + spec.beta(t);
    if (nu_p == 0.0) return std::nullopt;
    return 2.0 * spec.omega(t) * kappa / nu_p;
}

namespace {

MetricParams solve_on_window(const signals::AmplifierSpec& spec, double kappa, double t,
                             double tol, double lo, double hi) {
    const auto F = kappa0_constraint(spec, kappa, t);
    const auto pole = kappa0_pole(spec, kappa, t);

    // scan for the first sign change that does not straddle the pole
    const int n_scan = 2048;
    double prev_x = lo, prev_f = F(lo);
    for (int i = 1; i <= n_scan; ++i) {
        const double x = lo + (hi - lo) * i / n_scan;
        const double fx = F(x);
        const bool crosses_pole = pole && *pole > prev_x && *pole < x;
        if (!crosses_pole && ((prev_f < 0.0) != (fx < 0.0))) {
            const double root = num::find_root(F, prev_x, x, tol);
            return MetricParams::from_kappa(kappa, root);
        }
        prev_x = x;
        prev_f = fx;
    }
    std::ostringstream msg;
    msg << "solve_metric: no admissible root in (" << lo << ", " << hi
        << "); possible broken-PT parameters or out-of-range kappa";
    throw NoMetricError(msg.str());
}

}  // namespace

MetricParams solve_metric(const signals::AmplifierSpec& spec, double kappa, double t, double tol) {
    const double al = spec.alpha(t), be = spec.beta(t);
    if (al == be) return MetricParams::identity_metric();
    if (kappa == 0.0)
        throw InvalidArgument("solve_metric: kappa must be nonzero for alpha != beta");
    const double lo = 2.0 * std::abs(kappa) * (1.0 + 1e-9);
    const double hi = 100.0 * std::abs(kappa) + 100.0;
    return solve_on_window(spec, kappa, t, tol, lo, hi);
}

MetricTrack solve_metric_track(const signals::AmplifierSpec& spec, double kappa,
                               const std::vector<double>& times, double tol,
                               double jump_threshold) {
    MetricTrack track;
    track.t = times;
    track.params.reserve(times.size());
    std::optional<double> prev_root;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        MetricParams p;
        bool solved = false;
        if (prev_root) {
            // warm start: look near the previous root first
            const double w = std::max(0.5, 0.05 * *prev_root);
            const double lo = std::max(2.0 * std::abs(kappa) * (1.0 + 1e-9), *prev_root - w);
            try {
                p = solve_on_window(spec, kappa, t, tol, lo, *prev_root + w);
                solved = true;
            } catch (const NoMetricError&) {
            } catch (const DomainError&) {
            }
        }
        if (!solved) p = solve_metric(spec, kappa, t, tol);
        if (prev_root && !p.identity && std::abs(p.kappa0 - *prev_root) > jump_threshold)
            track.branch_jumps.push_back(i);
        if (!p.identity) prev_root = p.kappa0;
        track.params.push_back(p);
    }
    return track;
}

HermitizedCoeffs hermitized_coeffs(const signals::AmplifierSpec& spec, const MetricParams& p,
                                   double t, double residual_tol) {
    const double om = spec.omega(t);
    const double al = spec.alpha(t);
    const double be = spec.beta(t);
    if (p.identity) return HermitizedCoeffs{om, al, 0.0};

    const double k = p.kappa, k0 = p.kappa0, th = p.theta;
    const double c = std::cosh(2.0 * th);
    const double tnh = std::tanh(2.0 * th);

    // reduced closed forms
    const double omega0 =
        (k0 * (om * k0 - 2.0 * k * (al + be)) +
         2.0 * k * (k0 * (al + be) + (be - al) * th * tnh - 2.0 * om * k) * c) /
        (th * th);
    const double alpha0 =
        (k * (om * k0 - 2.0 * k * (al + be)) +
         c * ((om * k - al * k0) * (th * tnh - k0) + 2.0 * k * k * (be - al))) /
        (th * th);

    // independent route through the matrix exponential closed form
    const Mat3 km = k_matrix_closed(p);
    const auto v = km.apply({om, al, be});
    const double alpha0_m = v[1].real();
    const double beta0_m = v[2].real();
    const double residual = std::abs(alpha0_m - beta0_m);
    if (residual > residual_tol) {
        std::ostringstream msg;
        msg << "hermitized_coeffs: |alpha0 - beta0| = " << residual << " exceeds " << residual_tol;
        throw HermitizationFailure(msg.str(), residual);
    }
    HermitizedCoeffs out{omega0, alpha0, residual};
    return out;
}

HermitianOscillator hermitian_oscillator(const HermitizedCoeffs& c,
                                         const signals::AmplifierSpec& spec, double t) {
    const double denom = c.omega0 - 2.0 * c.alpha0;
    if (std::abs(denom) < 1e-14 * std::max(1.0, std::abs(c.omega0)))
        throw DegenerateMassError("hermitian_oscillator: omega0 = 2 alpha0, mass diverges");
    const double M0 = spec.mass(t) * spec.omega(t) / denom;
    const double Om0sq = c.omega0 * c.omega0 - 4.0 * c.alpha0 * c.alpha0;
    return HermitianOscillator{M0, Om0sq, Om0sq < 0.0};
}

}  // namespace ptamp::metric
