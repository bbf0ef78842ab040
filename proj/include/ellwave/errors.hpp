#pragma once

#include <stdexcept>
#include <string>

namespace ellwave {

// Argument outside the domain of a special function or relation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Evaluation at a zero of a quotient's denominator.
struct PoleError : std::domain_error {
    PoleError(std::string quotient_name, double x, double m);
    std::string quotient;
};

// Bad request: unknown name, missing slot or parameter, inconsistent grid.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A closure relation has no real solution for the requested parameters.
struct ExistenceError : std::domain_error {
    ExistenceError(std::string relation_id, const std::string& what);
    std::string relation;
};

// The solution is not periodic (m = 1 limit).
struct AperiodicError : std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace ellwave
