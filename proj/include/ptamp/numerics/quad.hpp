#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "ptamp/errors.hpp"

namespace ptamp::num {

namespace detail {

// Gauss 7 / Kronrod 15 pair (positive abscissae).
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kK15Weights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kG7Weights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double abs_of(const T& v) {
    if constexpr (std::is_same_v<T, double>)
        return std::abs(v);
    else
        return std::abs(v);
}

template <class T, class F>
void gk15(const F& f, double a, double b, T& integral, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T sum_k = f(mid) * kK15Weights[7];
    T sum_g = f(mid) * kG7Weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15Nodes[i];
        const T fl = f(mid - dx);
        const T fr = f(mid + dx);
        sum_k = sum_k + (fl + fr) * kK15Weights[i];
        if (i % 2 == 1) sum_g = sum_g + (fl + fr) * kG7Weights[i / 2];
    }
    integral = sum_k * half;
    err = abs_of<T>((sum_k - sum_g) * half);
    err = std::pow(200.0 * err, 1.5) < err ? std::pow(200.0 * err, 1.5) : err;
}

template <class T>
struct Segment {
    double a, b, err;
    T val;
};

template <class T, class F>
T adaptive_gk(const F& f, double a, double b, double tol, int max_segments) {
    // seed with several panels: a single wide panel can place every
    // abscissa outside a narrow bump and "converge" to zero
    constexpr int kSeed = 16;
    std::vector<Segment<T>> segs;
    double total_err = 0.0;
    for (int i = 0; i < kSeed; ++i) {
        Segment<T> s{a + (b - a) * i / kSeed, a + (b - a) * (i + 1) / kSeed, 0.0, T{}};
        gk15<T>(f, s.a, s.b, s.val, s.err);
        total_err += s.err;
        segs.push_back(s);
    }

    while (total_err > tol) {
        if (static_cast<int>(segs.size()) >= max_segments) {
            T best{};
            for (const auto& s : segs) best = best + s.val;
            throw AccuracyError("quad: subdivision limit reached", abs_of<T>(best), total_err);
        }
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        const Segment<T> s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        Segment<T> left{s.a, mid, 0.0, T{}};
        Segment<T> right{mid, s.b, 0.0, T{}};
        gk15<T>(f, left.a, left.b, left.val, left.err);
        gk15<T>(f, right.a, right.b, right.val, right.err);
        total_err += left.err + right.err - s.err;
        segs[worst] = left;
        segs.push_back(right);
    }
    T total{};
    for (const auto& s : segs) total = total + s.val;
    return total;
}

// Walks geometrically outward until the envelope stays below 1e-14.
template <class F>
double truncation_radius(const F& envelope, double start) {
    constexpr double floor = 1e-14;
    double r = std::max(1.0, std::abs(start));
    int quiet = 0;
    for (int k = 0; k < 80; ++k) {
        const double probes[3] = {r, 1.31 * r, 1.73 * r};
        bool small = true;
        for (double p : probes) small = small && std::abs(envelope(p)) < floor;
        quiet = small ? quiet + 1 : 0;
        if (quiet >= 2) return 1.73 * r;
        r *= 2.0;
        if (r > 1e12) return r;
    }
    return r;
}

}  // namespace detail

// Adaptive Gauss-Kronrod integral of f over [a, b] with absolute error
// controlled by tol. Infinite endpoints are truncated where the envelope
// (|f| by default) falls below 1e-14, sampled geometrically outward.
template <class T>
T quad_generic(const std::function<T(double)>& f, double a, double b, double tol,
               const std::function<double(double)>& envelope = nullptr) {
    if (!(tol > 0.0)) throw InvalidArgument("quad: tol must be positive");
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    auto env_up = [&](double x) { return envelope ? envelope(x) : detail::abs_of<T>(f(x)); };
    auto env_dn = [&](double x) { return envelope ? envelope(-x) : detail::abs_of<T>(f(-x)); };
    double lo = a, hi = b;
    if (hi_inf) hi = detail::truncation_radius(env_up, lo_inf ? 0.0 : a);
    if (lo_inf) lo = -detail::truncation_radius(env_dn, hi_inf ? 0.0 : -b);
    if (!(lo < hi)) throw InvalidArgument("quad: empty interval");
    return detail::adaptive_gk<T>(f, lo, hi, tol, 2000);
}

inline double quad(const std::function<double(double)>& f, double a, double b, double tol,
                   const std::function<double(double)>& envelope = nullptr) {
    return quad_generic<double>(f, a, b, tol, envelope);
}

inline std::complex<double> quad_complex(const std::function<std::complex<double>(double)>& f,
                                         double a, double b, double tol,
                                         const std::function<double(double)>& envelope = nullptr) {
    return quad_generic<std::complex<double>>(f, a, b, tol, envelope);
}

}  // namespace ptamp::num
