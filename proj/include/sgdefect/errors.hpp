#pragma once

#include <stdexcept>
#include <string>

namespace sgdefect {

/// Invalid input to an operation (bad index, |v| >= 1, lambda = 0, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Non-finite values appeared during a computation.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The field has not reached its asymptote inside the requested window.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// r(lambda, mu) evaluated on the diagonal lambda^2 = mu^2, or a pole of B/C.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Field asymptotes are not multiples of 2 pi / beta.
class NonDecayingFieldError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A complex logarithm jumped branch along a sweep.
class BranchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Baecklund seed whose cross derivatives are incompatible.
class InconsistentSeedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sgdefect
