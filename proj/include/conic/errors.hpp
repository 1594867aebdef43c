#pragma once

#include <stdexcept>
#include <string>

namespace conic {

/// Input outside the mathematical domain of an operation (empty graph, p >= nu, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Exact enumeration refused because the instance exceeds the configured cap.
class CapacityError : public std::length_error {
public:
    explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

/// A documented precondition of the operation does not hold.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// Combination of inputs that the library deliberately does not model.
class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conic
