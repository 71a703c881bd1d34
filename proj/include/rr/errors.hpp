#pragma once

#include <stdexcept>
#include <string>

namespace rr {

/// Argument outside the admissible domain (maturity beyond horizon, bad ordering).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Input violates a documented invariant of a domain type.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. `line()` is 1-based, 0 when not line oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? what + " (line " + std::to_string(line) + ")" : what)
        , line_(line)
    {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Requested method/configuration is outside what the engine supports.
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Explicit scheme would violate its stability bound.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterative solver failed to reach its tolerance within the iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rr
