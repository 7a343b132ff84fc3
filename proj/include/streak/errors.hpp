#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streak {

/// Malformed or invalid input data. Carries the 1-based line number when the
/// problem came from a file (0 otherwise).
class InputError : public std::runtime_error {
public:
    InputError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A request beyond a hard size limit (e.g. the enumeration cap).
class CapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed probability fell outside [-1e-12, 1 + 1e-12].
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace streak
