#include "ptamp/numerics/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptamp/errors.hpp"

namespace ptamp::num {

Trajectory::Trajectory(std::vector<double> t, std::vector<double> states,
                       std::vector<double> slopes, std::size_t dim)
    : t_(std::move(t)), y_(std::move(states)), f_(std::move(slopes)), dim_(dim) {
    if (t_.size() < 2) throw InvalidArgument("Trajectory: need at least two nodes");
    if (y_.size() != t_.size() * dim_ || f_.size() != y_.size())
        throw InvalidArgument("Trajectory: size mismatch");
    for (std::size_t i = 1; i < t_.size(); ++i)
        if (!(t_[i] > t_[i - 1])) throw InvalidArgument("Trajectory: grid not strictly increasing");
}

Trajectory Trajectory::from_samples(std::vector<double> t, std::vector<double> states,
                                    std::size_t dim) {
    const std::size_t n = t.size();
    if (n < 2) throw InvalidArgument("Trajectory: need at least two nodes");
    if (states.size() != n * dim) throw InvalidArgument("Trajectory: size mismatch");
    std::vector<double> slopes(states.size());
    for (std::size_t k = 0; k < dim; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double s;
            if (i == 0)
                s = (states[dim + k] - states[k]) / (t[1] - t[0]);
            else if (i == n - 1)
                s = (states[i * dim + k] - states[(i - 1) * dim + k]) / (t[i] - t[i - 1]);
            else {
                // three-point estimate on a possibly nonuniform grid
                const double h0 = t[i] - t[i - 1];
                const double h1 = t[i + 1] - t[i];
                const double d0 = (states[i * dim + k] - states[(i - 1) * dim + k]) / h0;
                const double d1 = (states[(i + 1) * dim + k] - states[i * dim + k]) / h1;
                s = (h1 * d0 + h0 * d1) / (h0 + h1);
            }
            slopes[i * dim + k] = s;
        }
    }
    return Trajectory(std::move(t), std::move(states), std::move(slopes), dim);
}

std::size_t Trajectory::locate(double t) const {
    if (!contains(t)) throw InvalidArgument("Trajectory: time outside stored grid");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - t_.begin());
    if (i == 0) i = 1;
    if (i == t_.size()) i = t_.size() - 1;
    return i - 1;
}

std::vector<double> Trajectory::eval(double t) const {
    const std::size_t i = locate(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    std::vector<double> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        out[k] = h00 * y_[i * dim_ + k] + h10 * h * f_[i * dim_ + k] +
                 h01 * y_[(i + 1) * dim_ + k] + h11 * h * f_[(i + 1) * dim_ + k];
    }
    return out;
}

std::vector<double> Trajectory::eval_derivative(double t) const {
    const std::size_t i = locate(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    std::vector<double> out(dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
        out[k] = d00 * y_[i * dim_ + k] + d10 * f_[i * dim_ + k] + d01 * y_[(i + 1) * dim_ + k] +
                 d11 * f_[(i + 1) * dim_ + k];
    }
    return out;
}

double Trajectory::eval_component(double t, std::size_t k) const {
    return eval(t)[k];
}

std::span<const double> Trajectory::state_at(std::size_t node) const {
    return {y_.data() + node * dim_, dim_};
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-order minus 4th-order weights, applied to the seven stages.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                         std::pair<double, double> t_span, double rel_tol, double abs_tol) {
    const auto [t0, t1] = t_span;
    if (!(t1 > t0)) throw InvalidArgument("integrate_ode: t_span must be increasing");
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw InvalidArgument("integrate_ode: tolerances must be positive");
    const std::size_t n = y0.size();

    std::vector<double> y(y0.begin(), y0.end());
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n);

    std::vector<double> ts, ys, fs;
    auto push_node = [&](double t, const std::vector<double>& yy, const std::vector<double>& ff) {
        ts.push_back(t);
        ys.insert(ys.end(), yy.begin(), yy.end());
        fs.insert(fs.end(), ff.begin(), ff.end());
    };

    double t = t0;
    rhs(t, y, k1);
    push_node(t, y, k1);

    double h = (t1 - t0) / 100.0;
    const double h_min_scale = 16.0 * std::numeric_limits<double>::epsilon();

    for (long step = 0; step < 50'000'000; ++step) {
        if (t >= t1) break;
        h = std::min(h, t1 - t);
        if (h < h_min_scale * std::max(std::abs(t), 1.0))
            throw SingularityError("integrate_ode: step size underflow", t);

        auto stage = [&](std::vector<double>& k, double c, auto&&... aw) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                ((acc += h * aw.first * (*aw.second)[i]), ...);
                ytmp[i] = acc;
            }
            rhs(t + c * h, ytmp, k);
        };
        stage(k2, c2, std::pair{a21, &k1});
        stage(k3, c3, std::pair{a31, &k1}, std::pair{a32, &k2});
        stage(k4, c4, std::pair{a41, &k1}, std::pair{a42, &k2}, std::pair{a43, &k3});
        stage(k5, c5, std::pair{a51, &k1}, std::pair{a52, &k2}, std::pair{a53, &k3},
              std::pair{a54, &k4});
        stage(k6, 1.0, std::pair{a61, &k1}, std::pair{a62, &k2}, std::pair{a63, &k3},
              std::pair{a64, &k4}, std::pair{a65, &k5});
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double err_i = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                      e6 * k6[i] + e7 * k7[i]);
            const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err_norm += (err_i / scale) * (err_i / scale);
        }
        err_norm = std::sqrt(err_norm / static_cast<double>(n));

        if (err_norm <= 1.0) {
            t += h;
            y = ynew;
            k1 = k7;  // first-same-as-last
            push_node(t, y, k1);
        }
        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        h *= factor;
    }
    if (t < t1) throw ConvergenceError("integrate_ode: step limit exceeded");
    return Trajectory(std::move(ts), std::move(ys), std::move(fs), n);
}

}  // namespace ptamp::num
