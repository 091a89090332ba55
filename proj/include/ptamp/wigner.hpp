#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

namespace ptamp::wigner {

using cplx = std::complex<double>;

// Two displaced copies of the same Gaussian mode: one centered at
// (+x0, +p0), the mirror at (-x0, -p0).
struct CatSpec {
    double x0 = 0.0;
    double p0 = 0.0;
};

// Momentum-space Gaussian (k_g/sqrt(g)) exp(-p^2/(2g) - i p x0) with
// k_g = (g/(pi eta^4 |g|^2))^{1/4}; this is the Fourier transform (with
// the 1/sqrt(2 pi) convention) of k_g exp(-g (x-x0)^2/2).
cplx psi_tilde(double p, cplx g, double eta, double x0);

// (1/sqrt(2)) [psi(p-p0; x0) + psi(p+p0; -x0)]. The width parameter ties
// eta^2 = 1/Re g, the pipeline identity for the ground-state mode.
cplx cat_state(double p, cplx g, const CatSpec& spec);

enum class CosineArg {
    corrected,  // cos(2 x0 p + 2 p0 x): matches the Fourier oracle identically
    textbook,    // cos(2 x0 p + 2 p x0): kept for comparison
};

// Closed form sqrt(g_r/(2 pi |g|)) (I1 + I2 + I3 + I4): two displaced
// Gaussian lobes plus the oscillatory cross term.
double wigner_closed(double x, double p, cplx g, const CatSpec& spec,
                     CosineArg arg = CosineArg::corrected);

// Oracle route: W = (1/sqrt(2 pi)) * integral over p' of
// psi_c(p - p'/2) conj(psi_c(p + p'/2)) e^{i p' x}, by adaptive
// quadrature with Gaussian tail truncation. Returns the complex value so
// callers can check the imaginary residue.
cplx wigner_numeric_full(double x, double p, cplx g, const CatSpec& spec, double tol = 1e-9);
double wigner_numeric(double x, double p, cplx g, const CatSpec& spec, double tol = 1e-9);

struct Rect {
    double x_lo, x_hi, p_lo, p_hi;
};

// Centers +-x0, +-p0 padded by six standard deviations of the widest of
// the position, momentum, and Wigner-lobe widths.
Rect default_bounds(cplx g, const CatSpec& spec);

struct WignerGrid {
    double t = 0.0;
    int nx = 0, np = 0;
    std::vector<double> x, p;
    std::vector<double> w;  // row-major, x outer

    double at(int i, int j) const { return w[static_cast<std::size_t>(i) * p.size() + j]; }
};

// Closed form sampled on a uniform grid, parallel over x-rows.
WignerGrid wigner_grid(cplx g, const CatSpec& spec, int nx, int np, const Rect& bounds,
                       double t_stamp, bool parallel = true);

// Rescales so the phase-space integral (trapezoid on the grid) is one.
void normalize_grid(WignerGrid& grid);

// W(0,0): the interference fringe amplitude that survives arbitrary lobe
// separation.
double origin_interference(cplx g, const CatSpec& spec);

// Header "# t=<t> nx=<nx> np=<np>" then "x,p,W" rows, x outer, 17
// significant digits.
void write_wigner_csv(std::ostream& os, const WignerGrid& grid);

}  // namespace ptamp::wigner
