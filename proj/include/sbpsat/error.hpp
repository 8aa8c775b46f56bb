#pragma once

#include <stdexcept>
#include <string>

namespace sbpsat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters: operator order, point count, penalty strength, CFL...
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Array length does not match the grid or operator it is used with.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A NaN or Inf appeared in an input sample or in the evolving state.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

} // namespace sbpsat
