#pragma once

#include <stdexcept>
#include <string>

namespace smf {

// Raised when an operation's geometric or algebraic preconditions fail.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a numerical procedure cannot produce a result
// (infeasible start, non-positive mass, failed recovery).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace smf
