#pragma once

#include <complex>
#include <functional>

#include "ptamp/ep.hpp"

namespace ptamp::states {

using cplx = std::complex<double>;

// Gaussian width parameter g = (eta0 + i g3)/g1 of the invariant
// eigenfunctions; Re g = eta0/g1 > 0 guarantees normalizability.
cplx mode_g(const ep::GCoefficients& g, double eta0 = 1.0);

// Coefficients of the transformed oscillator over the invariant ladder:
// H = omega_rho (a+ a- + 1/2) - alpha_rho a-^2 - conj(alpha_rho) a+^2.
struct HRhoCoeffs {
    double omega_rho;
    cplx alpha_rho;
};
HRhoCoeffs h_rho_ladder_coeffs(double eta, double etadot, double M0, double Omega0_sq,
                               double eta0 = 1.0);

// Prefactor conventions for phi_n:
//  - textbook:     (g/pi)^{1/4}, principal branch (unit norm only for real g)
//  - ground_real: (Re g/pi)^{1/4}; for n = 0 this is the exactly
//                 normalized ground-state form
//  - unit:        textbook rescaled by the exact closed-form norm
enum class NormMode { textbook, ground_real, unit };

// Hermite-argument conventions. With a complex width the two differ for
// n >= 2 and only the eigen form satisfies the invariant's eigenvalue
// equation (the H_{n-2} terms cancel only for argument sqrt(Re g) x, the
// form the ladder construction a+^n |0> produces; it is also exactly
// orthogonal under the plain L2 product). The sqrt(g) x variant
// reproduces the textbook formula and is kept for comparison.
enum class PhiVariant { eigen, textbook };

cplx phi_n(int n, double x, cplx g, NormMode mode = NormMode::textbook,
           PhiVariant variant = PhiVariant::eigen);

// Exact L2 norm squared under the textbook prefactor (closed form; no
// quadrature). For the eigen variant this is sqrt(|g|/Re g) for every n.
double phi_n_norm_sq(int n, cplx g, PhiVariant variant = PhiVariant::eigen);

// First and second x-derivatives, analytic through H_n' = 2n H_{n-1}.
cplx phi_n_dx(int n, double x, cplx g, NormMode mode = NormMode::textbook,
              PhiVariant variant = PhiVariant::eigen);
cplx phi_n_dx2(int n, double x, cplx g, NormMode mode = NormMode::textbook,
               PhiVariant variant = PhiVariant::eigen);

// Ground state (eta0/pi)^{1/4} eta^{-1/2} exp(-(eta0 - i M0 eta etadot)
// x^2/(2 eta^2)); exactly unit norm for any etadot.
cplx phi0_ground(double x, double eta, double etadot, double M0, double eta0);

// Residual |(g1 p^2 + g2 x^2 + g3 {x,p}) phi_n - 2 eta0 (n+1/2) phi_n| at
// x, with p = -i d/dx realized through the analytic derivatives.
double invariant_action_residual(int n, const ep::GCoefficients& g, double eta0, double x,
                                 NormMode mode = NormMode::textbook,
                                 PhiVariant variant = PhiVariant::eigen);

// theta_d(t) = -(n + 1/2) * integral of omega_rho from t0 to t.
double dynamical_phase(int n, const std::function<double(double)>& omega_rho, double t0, double t,
                       double tol = 1e-11);

// Level-n geometric rate as textbook: n gdot sqrt(g1/(2g)) + i gdot/(4g)
// - i (n + 1/2) gdot g1 / 2. Verified against the bra-ket oracle at n=0.
cplx geometric_rate_textbook(int n, cplx g, cplx gdot, double g1);

// Imaginary part written through r_g = sqrt(g1 g2), r± = sqrt(1 ± 1/r_g);
// requires r_g >= 1.
double geometric_rate_im_textbook(int n, const ep::GCoefficients& g, double g1_dot, double g2_dot,
                                 double g3_dot);

// Integrated Im-part rate over the stored grid (central differences +
// composite trapezoid up to the node nearest t).
double geometric_phase_im(int n, const ep::GSeries& series, double t);

// n=0 closed form (1/8) ln(g1 g2) relative to the series start.
double geometric_phase_im_closed0(const ep::GSeries& series, double t);

struct PhaseTrajectory {
    int n = 0;
    std::vector<double> t;
    std::vector<double> theta_d;
    std::vector<double> theta_g_im;
};

// Symmetrized covariance over (x, p).
struct Covariance2 {
    double V11 = 0.0, V22 = 0.0, V12 = 0.0;
    double det() const { return V11 * V22 - V12 * V12; }
};

// Textbook elements (2n+1)/2 * e^{-2 theta_im} * (g1, g2, M0 etadot).
Covariance2 covariance(int n, const ep::GCoefficients& g, double theta_im, double M0,
                       double etadot, double eta);

// Moment-consistent elements (2n+1)/2 * (g1, g2, -g3); for n = 0 these
// equal the quadrature moments of the normalized ground state and the
// determinant is exactly eta0^2 (2n+1)^2 / 4.
Covariance2 covariance_physical(int n, const ep::GCoefficients& g);

struct RsupVerdict {
    bool satisfied = false;
    double margin = 0.0;
};

// det V >= 1/4 (single mode, hbar = 1); margin = det V - 1/4.
RsupVerdict rsup_check(const Covariance2& v);

// The same principle written through the auxiliary variable:
// 1 + M0^2 eta^2 etadot^2 >= M0^2 etadot^2 + sqrt(1 + M0^2 eta^2 etadot^2).
RsupVerdict rsup_eta_form(double M0, double eta, double etadot);

}  // namespace ptamp::states
