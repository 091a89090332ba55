#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ptamp::num {

// Time-indexed state samples with cubic Hermite interpolation between
// nodes. Grid is strictly increasing; state dimension is fixed.
class Trajectory {
public:
    Trajectory() = default;

    // Nodes with supplied slopes (one slope per state component per node).
    Trajectory(std::vector<double> t, std::vector<double> states, std::vector<double> slopes,
               std::size_t dim);

    // Nodes only; slopes estimated by three-point differences.
    static Trajectory from_samples(std::vector<double> t, std::vector<double> states,
                                   std::size_t dim);

    std::size_t size() const { return t_.size(); }
    std::size_t dim() const { return dim_; }
    double t_front() const { return t_.front(); }
    double t_back() const { return t_.back(); }
    const std::vector<double>& times() const { return t_; }

    bool contains(double t) const { return t >= t_front() && t <= t_back(); }

    // Interpolated state / state derivative at t (t must lie inside the grid).
    std::vector<double> eval(double t) const;
    std::vector<double> eval_derivative(double t) const;
    double eval_component(double t, std::size_t k) const;

    std::span<const double> state_at(std::size_t node) const;

private:
    std::size_t locate(double t) const;

    std::vector<double> t_;
    std::vector<double> y_;   // size() * dim_, node-major
    std::vector<double> f_;   // slopes, same layout
    std::size_t dim_ = 0;
};

using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

// Adaptive embedded Runge-Kutta 5(4), Dormand-Prince coefficients, with
// accepted steps stored for dense cubic Hermite output. Local error is
// kept under abs_tol + rel_tol*|y| per component. Throws SingularityError
// (carrying the reached time) if the step size underflows.
Trajectory integrate_ode(const OdeRhs& rhs, std::span<const double> y0,
                         std::pair<double, double> t_span, double rel_tol, double abs_tol);

}  // namespace ptamp::num
