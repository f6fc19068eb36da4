// Error taxonomy shared across the engine.
#pragma once

#include <stdexcept>
#include <string>

namespace qys {

struct OutOfDomainError : std::runtime_error {
    explicit OutOfDomainError(const std::string& what) : std::runtime_error(what) {}
};

struct NotPositiveDefiniteError : std::runtime_error {
    explicit NotPositiveDefiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// |grad f| below the regular-point floor; level-set geometry is undefined.
struct CriticalPointError : std::runtime_error {
    explicit CriticalPointError(const std::string& what) : std::runtime_error(what) {}
};

struct WrongDimensionError : std::runtime_error {
    explicit WrongDimensionError(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfProfileRangeError : OutOfDomainError {
    explicit OutOfProfileRangeError(const std::string& what) : OutOfDomainError(what) {}
};

struct ProfileTooShortError : std::runtime_error {
    explicit ProfileTooShortError(const std::string& what) : std::runtime_error(what) {}
};

struct PhiNonPositiveError : std::runtime_error {
    explicit PhiNonPositiveError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qys
