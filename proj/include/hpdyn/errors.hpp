#pragma once

#include <stdexcept>
#include <string>

namespace hpdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid input: a point off the half-plane, a bad measure, m >= 1 in a norm bound.
struct DomainError : Error {
    using Error::Error;
};

struct QuadratureFailure : Error {
    using Error::Error;
};

// alpha < 1, or an operation called on the wrong class of map.
struct ClassificationError : Error {
    using Error::Error;
};

// A limit detector could not separate the cases within the budget.
struct Undetermined : Error {
    using Error::Error;
};

// Two routes that must agree did not.
struct ContradictionError : Error {
    using Error::Error;
};

struct DriftZero : Error {
    using Error::Error;
};

} // namespace hpdyn
