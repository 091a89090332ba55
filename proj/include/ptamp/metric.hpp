#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ptamp/numerics/mat3.hpp"
#include "ptamp/signals.hpp"

namespace ptamp::metric {

// Parameters of the similarity map rho = exp(Gamma) with
// Gamma = kappa0 a†a + kappa a^2 + kappa a†^2 (kappa real). theta =
// sqrt(kappa0^2 - 4 kappa^2) must be real and positive unless the metric
// is the identity (Hermitian input, Gamma = 0).
struct MetricParams {
    double kappa = 0.0;
    double kappa0 = 0.0;
    double theta = 0.0;
    bool identity = false;

    static MetricParams identity_metric() { return MetricParams{0.0, 0.0, 0.0, true}; }
    static MetricParams from_kappa(double kappa, double kappa0);
};

// Generator K of the coefficient map (omega, alpha, beta) -> (omega0,
// alpha0, beta0): rows {0, -4k, 4k}, {2k, -2k0, 0}, {-2k, 0, 2k0}.
num::Mat3 k_generator(double kappa0, double kappa);

// Closed form of exp(K), written in a cancellation-free factorization
// through sinh(theta)/theta so the theta -> 0 limit is smooth. Below
// theta = 1e-4 the ratio is series-expanded.
num::Mat3 k_matrix_closed(const MetricParams& p);

// Same entries as textbook directly in terms of cosh(2 theta), sinh(2
// theta); subject to cancellation at small theta, kept for cross-checks.
num::Mat3 k_matrix_raw(double kappa0, double kappa);

// F(kappa0) = tanh(2 theta)/theta - (beta - alpha)/(2 omega kappa -
// (alpha+beta) kappa0); the Hermitizing kappa0 is its root.
std::function<double(double)> kappa0_constraint(const signals::AmplifierSpec& spec, double kappa,
                                                double t);

// Excluded point of the constraint: kappa0 at which the right-hand side
// blows up. Empty when alpha + beta = 0.
std::optional<double> kappa0_pole(const signals::AmplifierSpec& spec, double kappa, double t);

// Finds the smallest admissible root above 2|kappa| by scanning brackets
// on (2|kappa|(1+1e-9), 100|kappa|+100), skipping the pole, then
// polishing with find_root. alpha = beta returns the identity metric.
MetricParams solve_metric(const signals::AmplifierSpec& spec, double kappa, double t, double tol);

// As solve_metric but warm-started near a previous root; used for
// pointwise re-solves along a time grid. Reports a branch jump when the
// root moves by more than jump_threshold between calls.
struct MetricTrack {
    std::vector<double> t;
    std::vector<MetricParams> params;
    std::vector<std::size_t> branch_jumps;  // indices where the root jumped
};
MetricTrack solve_metric_track(const signals::AmplifierSpec& spec, double kappa,
                               const std::vector<double>& times, double tol,
                               double jump_threshold = 0.5);

struct HermitizedCoeffs {
    double omega0 = 0.0;
    double alpha0 = 0.0;
    // |alpha0 - beta0| from the independent matrix-product route
    double hermiticity_residual = 0.0;
};

// Reduced closed forms for (omega0, alpha0), cross-checked against
// k_matrix_closed * (omega, alpha, beta); throws HermitizationFailure if
// the two roads disagree beyond residual_tol.
HermitizedCoeffs hermitized_coeffs(const signals::AmplifierSpec& spec, const MetricParams& p,
                                   double t, double residual_tol = 1e-6);

struct HermitianOscillator {
    double M0 = 0.0;
    double Omega0_sq = 0.0;
    bool inverted = false;  // Omega0_sq < 0
};

// M0 = m omega/(omega0 - 2 alpha0), Omega0^2 = omega0^2 - 4 alpha0^2.
HermitianOscillator hermitian_oscillator(const HermitizedCoeffs& c,
                                         const signals::AmplifierSpec& spec, double t);

}  // namespace ptamp::metric
