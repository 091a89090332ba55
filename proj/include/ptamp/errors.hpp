#pragma once

#include <stdexcept>
#include <string>

namespace ptamp {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Root finding: f(lo) and f(hi) do not straddle zero.
struct BracketError : Error {
    using Error::Error;
};

// Iteration limit reached before the requested tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

// ODE step size underflowed; carries the last time reached.
struct SingularityError : Error {
    SingularityError(const std::string& what, double t) : Error(what), reached_time(t) {}
    double reached_time;
};

// Quadrature failed to meet the tolerance; carries the best estimate.
struct AccuracyError : Error {
    AccuracyError(const std::string& what, double estimate, double error)
        : Error(what), best_estimate(estimate), error_estimate(error) {}
    double best_estimate;
    double error_estimate;
};

struct DomainError : Error {
    using Error::Error;
};

struct DegenerateMassError : DomainError {
    using DomainError::DomainError;
};

// No admissible metric root found while scanning kappa0 brackets.
struct NoMetricError : DomainError {
    using DomainError::DomainError;
};

struct HermitizationFailure : DomainError {
    HermitizationFailure(const std::string& what, double r) : DomainError(what), residual(r) {}
    double residual;
};

// Effective mass crosses zero inside the integration span.
struct CoefficientSingularity : DomainError {
    using DomainError::DomainError;
};

// The auxiliary variable reached zero despite the repulsive barrier.
struct BarrierViolation : DomainError {
    using DomainError::DomainError;
};

struct InvalidConstant : DomainError {
    using DomainError::DomainError;
};

struct NonNormalizable : DomainError {
    using DomainError::DomainError;
};

struct ParameterDomainError : DomainError {
    using DomainError::DomainError;
};

struct DiagonalizationError : DomainError {
    using DomainError::DomainError;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ptamp
