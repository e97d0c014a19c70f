#pragma once

#include <stdexcept>
#include <string>

namespace risloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// Target position for which the (AoA, ToA) pair is undefined, e.g. on the
/// AP-RIS segment or behind the RIS.
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Total delay too short to define an ellipse with the AP and RIS as foci.
class InfeasibleDelayError : public Error {
public:
    using Error::Error;
};

class NoSolutionError : public Error {
public:
    using Error::Error;
};

/// Raised by the scene generator when the rejection budget is exhausted.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Configuration error carrying the dotted path of the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace risloc
