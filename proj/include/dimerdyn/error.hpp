// error.hpp — exception types shared by the dimerdyn library and CLI

#pragma once

#include <stdexcept>
#include <string>

namespace dimerdyn {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A quadrature or search did not meet its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The request is well-formed but asks for a quantity that does not exist
// for these parameters (e.g. a rate at a symmetric-coupling point in a
// formula that needs a positive reorganization energy).
class RegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace dimerdyn
