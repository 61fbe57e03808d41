#pragma once

#include <stdexcept>
#include <string>

namespace gps {

// Base class for all toolkit errors. Exit-code mapping lives in the CLI.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Precondition / argument-range violations.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Memory / disk budget exceeded. Carries a hint for the caller.
class resource_error : public error {
public:
    explicit resource_error(const std::string& msg) : error(msg) {}
};

// A requested numeric tolerance could not be met; carries the achieved bound.
class numeric_error : public error {
public:
    numeric_error(const std::string& msg, double achieved)
        : error(msg + " (achieved bound " + std::to_string(achieved) + ")"),
          achieved_bound(achieved) {}
    double achieved_bound;
};

// Sieve-cache load failures, one reason per failure mode.
class cache_error : public error {
public:
    enum class reason { bad_magic, bad_version, truncated, x_mismatch, io };
    cache_error(reason r, const std::string& msg) : error(msg), why(r) {}
    reason why;
};

}  // namespace gps
