#pragma once

#include <stdexcept>
#include <string>

namespace nclab {

/// Bad input or a precondition the caller could have checked (CLI exit 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical procedure failed to converge or produced non-finite output (CLI exit 2).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// File could not be read or written (CLI exit 3).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nclab
