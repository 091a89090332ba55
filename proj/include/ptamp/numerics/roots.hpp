#pragma once

#include <functional>

namespace ptamp::num {

// Brent-style bracketing root finder: bisection with inverse-quadratic /
// secant acceleration. Requires f(lo)*f(hi) < 0. Stops once the bracket
// width falls below tol (plus a machine-epsilon floor); throws
// BracketError without a sign change and ConvergenceError after 200
// iterations.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace ptamp::num
