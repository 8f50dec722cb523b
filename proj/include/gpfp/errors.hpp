#pragma once

#include <stdexcept>

namespace gpfp {

// Spec file could not be parsed or fails structural validation.
struct SpecFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Normalization integral diverged or could not be computed.
struct NormalizationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact-rational evaluation was requested but the distribution is not
// aligned to a rational free Poisson family.
struct ExactUnavailableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The requested power/exponent combination is outside the regime the
// continuation construction covers.
struct RegimeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature or search hit its resolution cap before meeting tolerance.
struct ToleranceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A winding probe lies too close to the image curve to count reliably.
struct ProbeTooCloseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A discretized curve has a step too coarse to track the argument.
struct UnderResolvedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gpfp
