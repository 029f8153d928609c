#pragma once

#include <stdexcept>
#include <string>

namespace bvpcert {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

// Two polynomials expanded about different centers were combined.
class AlignmentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed solution file. The message starts with the offending field path.
class FormatError : public Error {
public:
    FormatError(const std::string &field, const std::string &what)
        : Error(field + ": " + what), field_(field) {}
    const std::string &field() const noexcept { return field_; }

private:
    std::string field_;
};

class SolveError : public Error {
public:
    explicit SolveError(const std::string &what, double condition_estimate = 0.0)
        : Error(what), condition_(condition_estimate) {}
    double condition_estimate() const noexcept { return condition_; }

private:
    double condition_;
};

class StateError : public Error {
public:
    using Error::Error;
};

// Decaying modes of the fundamental solution fell into the subnormal range;
// their relative accuracy is lost and certification cannot proceed.
class UnderflowDiagnostic : public Error {
public:
    UnderflowDiagnostic(const std::string &what, double smallest)
        : Error(what), smallest_(smallest) {}
    double smallest_magnitude() const noexcept { return smallest_; }

private:
    double smallest_;
};

} // namespace bvpcert
