#pragma once

#include <stdexcept>
#include <string>

namespace qbm {

// Every numerical failure surfaces as one of these; the CLI maps them to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct RangeError : Error { using Error::Error; };
struct PoleError : Error { using Error::Error; };
struct PrecisionLossError : Error { using Error::Error; };
struct NonConvergenceError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct NotAvailableError : Error { using Error::Error; };
struct DegenerateSystemError : Error { using Error::Error; };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qbm
