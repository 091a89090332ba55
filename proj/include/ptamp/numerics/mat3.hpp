#pragma once

#include <array>
#include <complex>

namespace ptamp::num {

using cplx = std::complex<double>;

// Dense 3x3 complex matrix, row-major.
class Mat3 {
public:
    Mat3() : e_{} {}

    static Mat3 identity();
    static Mat3 from_rows(std::array<cplx, 3> r0, std::array<cplx, 3> r1, std::array<cplx, 3> r2);
    static Mat3 diagonal(cplx d0, cplx d1, cplx d2);

    cplx& operator()(int i, int j) { return e_[static_cast<std::size_t>(3 * i + j)]; }
    const cplx& operator()(int i, int j) const { return e_[static_cast<std::size_t>(3 * i + j)]; }

    Mat3 operator*(const Mat3& rhs) const;
    Mat3 operator+(const Mat3& rhs) const;
    Mat3 operator-(const Mat3& rhs) const;
    Mat3 operator*(cplx s) const;

    std::array<cplx, 3> apply(const std::array<cplx, 3>& v) const;

    cplx det() const;
    cplx trace() const { return e_[0] + e_[4] + e_[8]; }

    // Maximum column sum of absolute values.
    double one_norm() const;
    double max_abs() const;
    bool finite() const;

private:
    std::array<cplx, 9> e_;
};

// exp(A) by scaling-and-squaring with a truncated Taylor series.
// Scales until ||A||_1 <= 0.5, sums terms until the running term drops
// below 1e-18 relative to the partial sum, then squares back up.
Mat3 mat_exp(const Mat3& a);

}  // namespace ptamp::num
