#include "ptamp/numerics/mat3.hpp"

#include <cmath>

#include "ptamp/errors.hpp"

namespace ptamp::num {

Mat3 Mat3::identity() {
    Mat3 m;
    m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
    return m;
}

Mat3 Mat3::from_rows(std::array<cplx, 3> r0, std::array<cplx, 3> r1, std::array<cplx, 3> r2) {
    Mat3 m;
    for (int j = 0; j < 3; ++j) {
        m(0, j) = r0[static_cast<std::size_t>(j)];
        m(1, j) = r1[static_cast<std::size_t>(j)];
        m(2, j) = r2[static_cast<std::size_t>(j)];
    }
    return m;
}

Mat3 Mat3::diagonal(cplx d0, cplx d1, cplx d2) {
    Mat3 m;
    m(0, 0) = d0;
    m(1, 1) = d1;
    m(2, 2) = d2;
    return m;
}

Mat3 Mat3::operator*(const Mat3& rhs) const {
    Mat3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            cplx s = 0.0;
            for (int k = 0; k < 3; ++k) s += (*this)(i, k) * rhs(k, j);
            out(i, j) = s;
        }
    return out;
}

Mat3 Mat3::operator+(const Mat3& rhs) const {
    Mat3 out;
    for (std::size_t k = 0; k < 9; ++k) out.e_[k] = e_[k] + rhs.e_[k];
    return out;
}

Mat3 Mat3::operator-(const Mat3& rhs) const {
    Mat3 out;
    for (std::size_t k = 0; k < 9; ++k) out.e_[k] = e_[k] - rhs.e_[k];
    return out;
}

Mat3 Mat3::operator*(cplx s) const {
    Mat3 out;
    for (std::size_t k = 0; k < 9; ++k) out.e_[k] = e_[k] * s;
    return out;
}

std::array<cplx, 3> Mat3::apply(const std::array<cplx, 3>& v) const {
    std::array<cplx, 3> out{};
    for (int i = 0; i < 3; ++i) {
        cplx s = 0.0;
        for (int j = 0; j < 3; ++j) s += (*this)(i, j) * v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

cplx Mat3::det() const {
    const Mat3& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double Mat3::one_norm() const {
    double best = 0.0;
    for (int j = 0; j < 3; ++j) {
        double col = 0.0;
        for (int i = 0; i < 3; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

double Mat3::max_abs() const {
    double best = 0.0;
    for (const auto& v : e_) best = std::max(best, std::abs(v));
    return best;
}

bool Mat3::finite() const {
    for (const auto& v : e_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

Mat3 mat_exp(const Mat3& a) {
    if (!a.finite()) throw InvalidArgument("mat_exp: non-finite entry");

    int squarings = 0;
    double norm = a.one_norm();
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    const Mat3 b = a * cplx(std::ldexp(1.0, -squarings), 0.0);

    Mat3 sum = Mat3::identity();
    Mat3 term = Mat3::identity();
    for (int k = 1; k <= 64; ++k) {
        term = term * b * cplx(1.0 / k, 0.0);
        sum = sum + term;
        if (term.one_norm() < 1e-18 * std::max(1.0, sum.one_norm())) break;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

}  // namespace ptamp::num
