#pragma once

#include <stdexcept>
#include <string>

namespace mstates {

/// Bad or missing run configuration (CLI exit code 1).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or inconsistent input data (CLI exit code 2).
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parse failure in a delimited input file; carries the line number.
class parse_error : public data_error {
public:
    parse_error(const std::string& msg, std::size_t line)
        : data_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Input violates a domain precondition (non-positive price, zero volatility, ...).
class domain_error : public data_error {
public:
    explicit domain_error(const std::string& msg) : data_error(msg) {}
};

/// Numerical routine failed to produce a usable result (CLI exit code 3).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mstates
