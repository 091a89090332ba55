#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptamp/numerics/ode.hpp"

namespace ptamp::signals {

enum class SignalKind { constant, cosine, toy_power, tabulated };

// A real-valued signal of time with a declared domain. The four base
// kinds are constant, cosine amp*cos(freq*t + phase), power law
// coeff*t^power (t > 0 when the power is not a nonnegative integer), and
// a cubically interpolated table that refuses extrapolation. An optional
// affine wrap offset + scale*base(t) keeps derived signals within the
// same type.
class ParameterSignal {
public:
    ParameterSignal() = default;  // constant zero

    static ParameterSignal constant(double value);
    static ParameterSignal cosine(double amp, double freq, double phase);
    static ParameterSignal toy_power(double coeff, double power);
    static ParameterSignal table(std::vector<double> t, std::vector<double> v);

    double operator()(double t) const;
    // Analytic derivative for the closed kinds, interpolant slope for tables.
    double derivative(double t) const;

    SignalKind kind() const { return kind_; }
    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }

    ParameterSignal affine(double offset, double scale) const;

    // max |s(t) - s(-t)| over the symmetric part of the domain; a
    // diagnostic for evenness in time, not an enforced constraint.
    double evenness_defect(int samples = 201) const;

    static ParameterSignal from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

private:
    void check_domain(double t) const;
    double base_value(double t) const;
    double base_derivative(double t) const;

    SignalKind kind_ = SignalKind::constant;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // kind parameters
    std::shared_ptr<const num::Trajectory> table_;
    double offset_ = 0.0, scale_ = 1.0;
    double t_min_ = -std::numeric_limits<double>::infinity();
    double t_max_ = std::numeric_limits<double>::infinity();
};

// The four input signals defining the amplifier Hamiltonian
// H = omega (a†a + 1/2) + alpha a^2 + beta a†^2 with ladder operators
// built from mass m(t) and frequency omega(t); hbar = 1.
struct AmplifierSpec {
    ParameterSignal omega, alpha, beta, mass;

    double t_min() const;
    double t_max() const;
    // mass(t) > 0 and omega(t) > 0 spot-checked across the domain
    void validate(double t_lo, double t_hi, int samples = 64) const;

    static AmplifierSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

// Equivalent position-momentum form H = p^2/(2M) + M Omega^2 x^2/2
// + (i/2) nu_minus {x,p}.
struct EquivalentForm {
    double M;
    double Omega2;
    double nu_plus;
    double nu_minus;
};

// M^{-1} = (1 - nu+/omega)/m, Omega^2 = omega^2 - nu+^2, nu± = alpha ± beta.
// Throws DegenerateMassError when omega = nu+.
EquivalentForm equivalent_form(const AmplifierSpec& spec, double t);

// Real-spectrum test for the quadratic-form matrix [[h11,h12],[h21,h22]]:
// (Re tau)^2 - 4 Re Delta >= 0 with tau the trace and Delta the determinant.
bool pt_unbroken(double h11, double h22, std::complex<double> h12, std::complex<double> h21);

// Traceless quadratic-form entries for the amplifier region test at unit
// effective mass and frequency: the off-diagonal pair carries the
// coupling product alpha*beta and the mass-positivity factor
// (1 - alpha - beta), so the trace-determinant test reduces exactly (bit
// for bit) to alpha*beta*(1 - alpha - beta) >= 0.
struct BilinearEntries {
    double h11, h22;
    std::complex<double> h12, h21;
};
BilinearEntries pt_bilinear_unit(double alpha, double beta);

struct PtRegionGrid {
    std::vector<double> alpha, beta;    // grid axes, size n each
    std::vector<std::uint8_t> unbroken; // row-major, alpha outer
    bool at(std::size_t i, std::size_t j) const { return unbroken[i * beta.size() + j] != 0; }
};

// pt_unbroken sampled on an n-by-n grid of the alpha-beta plane at unit
// mass and frequency.
PtRegionGrid pt_region_scan(std::pair<double, double> alpha_range,
                            std::pair<double, double> beta_range, int n);

// Mass/frequency modulation m0(1+eps f), omega0(1+eps f/2) realized as an
// amplifier spec with alpha = beta = omega0*eps*f/2 (Hermitian at all t).
// Warns through the return flag when |eps| > 0.2.
struct ModulatedSpec {
    AmplifierSpec spec;
    bool large_eps_warning;
};
ModulatedSpec modulated_spec(double m0, double omega0, double eps, const ParameterSignal& f);

}  // namespace ptamp::signals
