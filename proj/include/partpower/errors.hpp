#pragma once

#include <stdexcept>
#include <string>

namespace partpower {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Root finder was handed an interval without a sign change.
class BracketError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A planning or simulation input is missing a required assumption or is
// internally inconsistent.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The per-cell confidence split underflowed to zero in double precision.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Lookup into an (arm, leaf) cell that has no honest observations.
class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string& what, int arm, int leaf)
        : std::runtime_error(what), arm_(arm), leaf_(leaf) {}

    int arm() const noexcept { return arm_; }
    int leaf() const noexcept { return leaf_; }

private:
    int arm_;
    int leaf_;
};

class LearnerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document; line is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace partpower
