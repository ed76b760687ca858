#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fri {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid arguments: bad indices, out-of-domain points, malformed input files.
class InputError : public Error {
public:
    using Error::Error;
};

// Operation undefined for the given signal (e.g. phase retrievability of f = 0).
class DomainError : public Error {
public:
    using Error::Error;
};

// Exact enumeration refused because it would exceed a hard guard.
class CapacityError : public Error {
public:
    CapacityError(const std::string& what, int exponent)
        : Error(what), exponent_(exponent) {}
    // Base-2 exponent of the enumeration that was refused.
    int exponent() const { return exponent_; }

private:
    int exponent_;
};

// A frame or sample group failed phase-retrievability certification.
class CertificationError : public Error {
public:
    using Error::Error;
};

// Model structure violated (orphan innovation position, mismatched models, ...).
class ModelConsistencyError : public Error {
public:
    using Error::Error;
};

// Phase adjustment infeasible: the sign constraints admit no assignment.
class ReconstructionError : public Error {
public:
    ReconstructionError(const std::string& what, std::vector<int> cycle)
        : Error(what), cycle_(std::move(cycle)) {}
    // Piece indices of a violating cycle (or pair), when one was identified.
    const std::vector<int>& violating_cycle() const { return cycle_; }

private:
    std::vector<int> cycle_;
};

}  // namespace fri
