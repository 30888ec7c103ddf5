#pragma once

#include <stdexcept>
#include <string>

namespace cifs {

/// Malformed or out-of-range configuration (bad JSON, unresolvable tail rule,
/// parameters outside a formula's domain).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A requested point cloud would exceed the configured size cap.
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

}  // namespace cifs
