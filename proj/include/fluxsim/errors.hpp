#pragma once

#include <stdexcept>
#include <string>

namespace fluxsim {

// Malformed or inconsistent configuration input. Carries the source location
// so the CLI can report line/column (exit code 2).
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& msg, int line, int col)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ", column "
                             + std::to_string(col) + ")"),
          line_(line), col_(col) {}
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg), line_(0), col_(0) {}
    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

// Runtime numerical failure: eigensolver non-convergence, divergent dispersive
// sum, missing crossing bracket, calibration failure (exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fluxsim
