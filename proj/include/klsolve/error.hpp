#pragma once

#include <stdexcept>
#include <string>

namespace klsolve {

// Malformed or out-of-contract input (bad signs, empty rows, bad JSON shapes).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class DimensionError : public InputError {
public:
    using InputError::InputError;
};

// Argument outside the mathematical domain, e.g. a non-positive divergence argument.
class DomainError : public InputError {
public:
    using InputError::InputError;
};

}  // namespace klsolve
