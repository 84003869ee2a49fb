#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace outagekit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument value or inconsistent parameter combination.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Not enough usable data (empty patterns, zero valid replications, infeasible fit).
class EstimationError : public Error {
public:
    using Error::Error;
};

/// Quadrature or root-finding failed to reach its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The requested model/MAC combination has no implementation.
class NotImplementedError : public Error {
public:
    using Error::Error;
};

/// An operation was called on input lacking required metadata.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration text.
class ConfigParseError : public Error {
public:
    using Error::Error;
};

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a process-wide warning sink and returns the previous one.
/// The default sink writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace outagekit
