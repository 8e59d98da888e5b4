#pragma once

#include <stdexcept>
#include <string>

namespace hermop {

/// Bad arguments, inconsistent dimensions, malformed files. CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure on otherwise valid input (inadequate window, degenerate
/// fit, out-of-range factor weights). CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace hermop
