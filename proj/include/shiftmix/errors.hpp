#pragma once

#include <stdexcept>
#include <string>

namespace shiftmix {

// Raised when inputs violate a documented precondition (invalid measure
// parameters, mismatched index domains, weight rules outside their range).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a certified numerical procedure cannot meet its contract:
// truncation caps hit before tolerance, singular parameter combinations,
// rejection-loop caps, or fits with too few usable points.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by the configuration layer for malformed documents. Carries a
// 1-based line number when the failure can be anchored to one (-1 otherwise).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& message, int line = -1)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                      : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace shiftmix
