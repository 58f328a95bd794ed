#pragma once

#include <stdexcept>
#include <string>

namespace heegner {

// Raised when a computed quantity violates an identity that must hold
// (mass, sum-to-one, integrality of a derived eigenvalue, ...).
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

// Raised when an input exceeds a documented desk-scale guard.
class GuardError : public std::invalid_argument {
public:
    explicit GuardError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace heegner
