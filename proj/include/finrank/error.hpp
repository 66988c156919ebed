#pragma once

#include <stdexcept>
#include <string>

namespace finrank {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched dimensions or a violated precondition on the arguments.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A point lies outside the domain of a kernel or density.
class DomainError : public Error {
public:
    using Error::Error;
};

/// SVD, eigen-solver or quadrature failure.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Atom recovery did not reproduce the input moments.
class RecoveryFailed : public Error {
public:
    using Error::Error;
};

/// The candidate grid disagrees with the rank of the full matrix.
class InconsistentRank : public Error {
public:
    using Error::Error;
};

}  // namespace finrank
