#pragma once

#include <complex>

#include "ptamp/ep.hpp"

namespace ptamp::invariant {

using cplx = std::complex<double>;

// 2x2 complex matrix, row-major.
struct Mat2 {
    cplx a11, a12, a21, a22;

    Mat2 operator*(const Mat2& r) const {
        return Mat2{a11 * r.a11 + a12 * r.a21, a11 * r.a12 + a12 * r.a22,
                    a21 * r.a11 + a22 * r.a21, a21 * r.a12 + a22 * r.a22};
    }
    Mat2 operator-(const Mat2& r) const {
        return Mat2{a11 - r.a11, a12 - r.a12, a21 - r.a21, a22 - r.a22};
    }
    Mat2 adjoint() const {
        return Mat2{std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
    }
    cplx trace() const { return a11 + a22; }
    cplx det() const { return a11 * a22 - a12 * a21; }
    double max_abs() const;
};

// Both roots of the characteristic polynomial.
std::pair<cplx, cplx> eigenvalues(const Mat2& m);

// Symmetric coefficient matrix [[g2, g3], [g3, g1]] of the invariant over
// the operator vector (x, p); determinant g1 g2 - g3^2 = eta0^2 > 0.
struct QuadForm2 {
    double g2, g3, g1;

    static QuadForm2 from_g(const ep::GCoefficients& g) { return QuadForm2{g.g2, g.g3, g.g1}; }
    Mat2 matrix() const { return Mat2{g2, g3, g3, g1}; }
    double det() const { return g1 * g2 - g3 * g3; }
};

// Lambda = i sigma_y H = [[g3, g1], [-g2, -g3]]; eigenvalues are
// +- i sqrt(g1 g2 - g3^2).
Mat2 lambda_matrix(const QuadForm2& q);

// Row coefficients of the lowering combination a- = u11 x + u12 p, with
// u- = (g3 - i eta0, g1)/sqrt(2 eta0 g1); normalized so [a-, a+] = 1.
struct LadderCoeffs {
    cplx u11, u12;
    double eta0;

    // x = i u12 (a- - a+), p = i (u11 a+ - conj(u11) a-)
    cplx x_from_minus() const { return cplx(0, 1) * u12; }
    cplx x_from_plus() const { return -cplx(0, 1) * u12; }
    cplx p_from_minus() const { return -cplx(0, 1) * std::conj(u11); }
    cplx p_from_plus() const { return cplx(0, 1) * u11; }
};

LadderCoeffs ladder_coeffs(const ep::GCoefficients& g, double eta0 = 1.0);

// Similarity pair diagonalizing Lambda: columns of Q are the right
// vectors v- = -sigma_y u-†, v+ = conj(v-); rows of Qinv are u-, conj(u-).
struct SymplecticPair {
    Mat2 Q, Qinv;
    cplx lambda_minus, lambda_plus;  // -i eta0, +i eta0
};

SymplecticPair symplectic_diag(const ep::GCoefficients& g, double eta0 = 1.0);

// epsilon_n = 2 eta0 (n + 1/2).
double invariant_eigenvalue(int n, double eta0);

// Rebuilds (g2, g1, g3) from the factorized form 2 eta0 (a+ a- + 1/2) by
// collecting coefficients over {x^2, p^2, {x,p}, 1}; returns the largest
// deviation (the constant must cancel exactly).
double invariant_reconstruction_check(const ep::GCoefficients& g, double eta0 = 1.0);

}  // namespace ptamp::invariant
