#pragma once

#include <stdexcept>
#include <string>

namespace gml {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible tensor/matrix shapes.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Invalid argument value (temperature <= 0, bad ratios, empty mask, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation
/// (negative probabilities, label out of range, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Non-finite value produced or consumed where finiteness is required.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries the offending line when known.
class ParseError : public Error {
public:
    using Error::Error;
    ParseError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Structurally invalid dataset (cross-graph edge, empty corpus, ...).
class DatasetError : public Error {
public:
    using Error::Error;
};

/// Missing or unreadable file.
class IoError : public Error {
public:
    using Error::Error;
};

/// Inconsistent experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gml
