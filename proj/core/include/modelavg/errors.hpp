#pragma once

#include <stdexcept>
#include <string>

namespace modelavg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input that violates a documented precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The design cannot support the requested fit.
class DesignError : public Error {
public:
    using Error::Error;
};

/// Unrestricted model is unidentifiable (det(X'X) numerically zero).
class CollinearDesign : public DesignError {
public:
    using DesignError::DesignError;
};

/// First regressor column has zero norm.
class ZeroColumn : public DesignError {
public:
    using DesignError::DesignError;
};

/// Resampler gave up after too many singular resampled designs.
class TooManySingularResamples : public Error {
public:
    using Error::Error;
};

} // namespace modelavg
