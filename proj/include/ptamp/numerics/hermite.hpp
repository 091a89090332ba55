#pragma once

#include <complex>

namespace ptamp::num {

// Physicists' Hermite polynomial H_n by the three-term recurrence
// H_{n+1} = 2x H_n - 2n H_{n-1}. Intended for n <= 64; large n at large
// |x| may overflow to infinity, which is left to the caller.
template <class Scalar>
Scalar hermite(int n, Scalar x) {
    if (n == 0) return Scalar(1);
    Scalar hm = Scalar(1);
    Scalar h = Scalar(2) * x;
    for (int k = 1; k < n; ++k) {
        Scalar hn = Scalar(2) * x * h - Scalar(2 * k) * hm;
        hm = h;
        h = hn;
    }
    return h;
}

inline double hermite(int n, double x) {
    return hermite<double>(n, x);
}
inline std::complex<double> hermite(int n, std::complex<double> x) {
    return hermite<std::complex<double>>(n, x);
}

}  // namespace ptamp::num
