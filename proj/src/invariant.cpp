#include "ptamp/invariant.hpp"

#include <cmath>

#include "ptamp/errors.hpp"

namespace ptamp::invariant {

double Mat2::max_abs() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

std::pair<cplx, cplx> eigenvalues(const Mat2& m) {
    const cplx half_tr = 0.5 * m.trace();
    const cplx disc = std::sqrt(half_tr * half_tr - m.det());
    return {half_tr - disc, half_tr + disc};
}

Mat2 lambda_matrix(const QuadForm2& q) {
    return Mat2{q.g3, q.g1, -q.g2, -q.g3};
}

LadderCoeffs ladder_coeffs(const ep::GCoefficients& g, double eta0) {
    if (!(g.g1 > 0.0)) throw DomainError("ladder_coeffs: g1 must be positive");
    if (!(eta0 > 0.0)) throw DomainError("ladder_coeffs: eta0 must be positive");
    const double norm = 1.0 / std::sqrt(2.0 * eta0 * g.g1);
    return LadderCoeffs{cplx(g.g3, -eta0) * norm, cplx(g.g1, 0.0) * norm, eta0};
}

SymplecticPair symplectic_diag(const ep::GCoefficients& g, double eta0) {
    const LadderCoeffs u = ladder_coeffs(g, eta0);
    // v- = -sigma_y u-† = (i conj(u12), -i conj(u11))
    const cplx v1 = cplx(0, 1) * std::conj(u.u12);
    const cplx v2 = -cplx(0, 1) * std::conj(u.u11);
    const cplx norm_check = u.u11 * v1 + u.u12 * v2;  // u- v- must be 1
    if (std::abs(norm_check - 1.0) > 1e-10)
        throw DiagonalizationError("symplectic_diag: u- v- normalization failed");

    SymplecticPair out;
    out.Q = Mat2{v1, std::conj(v1), v2, std::conj(v2)};
    out.Qinv = Mat2{u.u11, u.u12, std::conj(u.u11), std::conj(u.u12)};
    out.lambda_minus = cplx(0, -eta0);
    out.lambda_plus = cplx(0, eta0);
    return out;
}

double invariant_eigenvalue(int n, double eta0) {
    if (n < 0) throw InvalidArgument("invariant_eigenvalue: n must be nonnegative");
    return 2.0 * eta0 * (n + 0.5);
}

double invariant_reconstruction_check(const ep::GCoefficients& g, double eta0) {
    const LadderCoeffs u = ladder_coeffs(g, eta0);
    // a+ a- expanded over {x^2, p^2, {x,p}, 1} with [x, p] = i
    const double cx2 = std::norm(u.u11);
    const double cp2 = std::norm(u.u12);
    const cplx cross = std::conj(u.u11) * u.u12;
    const double cxp = cross.real();
    const double c1 = -cross.imag();  // constant from reordering xp, px
    const double dev_x2 = std::abs(2.0 * eta0 * cx2 - g.g2);
    const double dev_p2 = std::abs(2.0 * eta0 * cp2 - g.g1);
    const double dev_xp = std::abs(2.0 * eta0 * cxp - g.g3);
    const double dev_const = std::abs(2.0 * eta0 * (0.5 + c1));
    return std::max({dev_x2, dev_p2, dev_xp, dev_const});
}

}  // namespace ptamp::invariant
