#ifndef TAUVAR_ERRORS_HPP
#define TAUVAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tauvar {

// Every error raised by the library derives from Error, so callers that do
// not care about the category can catch a single type.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
   public:
    DivisionByZero() : Error("division by zero") {}
    explicit DivisionByZero(const std::string& what) : Error(what) {}
};

// Operands live in different coefficient backends.
class MixedBackends : public Error {
   public:
    MixedBackends() : Error("operands belong to different coefficient backends") {}
    explicit MixedBackends(const std::string& what) : Error(what) {}
};

// The backend cannot perform the requested operation (no q-th roots,
// no point enumeration over function fields, ...).
class CapabilityError : public Error {
   public:
    using Error::Error;
};

class NoSplittingFound : public CapabilityError {
   public:
    using CapabilityError::CapabilityError;
};

// Mathematical precondition violated by otherwise well-formed input.
class DomainError : public Error {
   public:
    using Error::Error;
};

class NotAMorphismInto : public DomainError {
   public:
    using DomainError::DomainError;
};

class NotASubvariety : public DomainError {
   public:
    using DomainError::DomainError;
};

class NotASubmodule : public DomainError {
   public:
    using DomainError::DomainError;
};

class InsufficientPrimes : public DomainError {
   public:
    using DomainError::DomainError;
};

// An internal consistency check failed; always a bug.
class InvariantViolation : public Error {
   public:
    using Error::Error;
};

}  // namespace tauvar

#endif
