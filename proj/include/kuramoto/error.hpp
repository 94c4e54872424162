#pragma once

#include <stdexcept>
#include <string>

namespace kuramoto {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Vector lengths or matrix sizes that do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Structural violation in a graph, partition or plan.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Blow-up, step-size underflow or non-converging fixed-point iteration.
class NumericalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace kuramoto
