#pragma once

#include <stdexcept>
#include <string>

namespace evt {

// Domain/contract violations: bad arguments, values outside support,
// malformed input. CLI maps these to exit code 2.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public DomainError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : DomainError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class ConfigError : public DomainError {
public:
    explicit ConfigError(const std::string& msg) : DomainError(msg) {}
};

// Numeric failures: non-convergent optimizations, quadrature breakdown,
// calibration that did not stabilize. CLI maps these to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

class FitError : public NumericError {
public:
    explicit FitError(const std::string& msg) : NumericError(msg) {}
};

}  // namespace evt
