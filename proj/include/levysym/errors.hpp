#pragma once

#include <stdexcept>
#include <string>

namespace levysym {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid model or market parameters (invariant violated at construction).
struct ParameterError : Error {
    using Error::Error;
};

// Complex argument left the analyticity strip of the cumulant, or a required
// exponential moment does not exist. Message names the offending bound.
struct StripViolation : Error {
    using Error::Error;
};

// Plain real-argument domain violation (sigma < 0, T <= 0, y = 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Operation not defined for this model variant (e.g. jump tilt of a diffusion).
struct UnsupportedVariant : Error {
    using Error::Error;
};

// Adaptive quadrature could not meet its tolerance within the node budget.
// Pricers do not throw this; they return a flagged best estimate. It is thrown
// by callers that require convergence (implied vol inversion, CLI hard mode).
struct QuadratureFailure : Error {
    using Error::Error;
};

// Implied volatility inversion failed (price outside the no-arbitrage band).
struct InversionFailure : Error {
    using Error::Error;
};

// Malformed calibration input; carries the 1-based line number.
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_number(line) {}
    std::size_t line_number;
};

// Too few observations for calibration.
struct InsufficientData : Error {
    using Error::Error;
};

// Monte Carlo estimator handed zero samples.
struct EmptySample : Error {
    using Error::Error;
};

// MLE iteration did not converge.
struct OptimizationFailure : Error {
    using Error::Error;
};

// Martingale root-solve bracket does not contain a sign change; message
// reports the gap at both bracket endpoints.
struct NoRootInBracket : Error {
    using Error::Error;
};

// Analytic and finite-difference sensitivities disagree beyond tolerance,
// which signals a convention error rather than noise.
struct ConsistencyFailure : Error {
    using Error::Error;
};

// A required power moment diverges for the requested conjugation.
struct MomentDivergence : Error {
    using Error::Error;
};

} // namespace levysym
