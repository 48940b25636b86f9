#pragma once

#include <stdexcept>
#include <string>

namespace steerharvest {

// Invalid numeric input (non-finite argument, argument outside the supported
// range). Maps to CLI exit code 1.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A structural invariant of an input object failed (trace, diagonal sign,
// parameter positivity). Maps to CLI exit code 1.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Floating-point trouble past the documented noise thresholds. Maps to CLI
// exit code 2.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Richardson extrapolation residual exceeded the requested tolerance.
class convergence_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

// Bisection bracket endpoints have the same sign.
class no_sign_change_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

// Asymmetry landscape is flat; no peak to refine.
class no_peak_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

} // namespace steerharvest
