#pragma once

#include <stdexcept>
#include <string>

namespace boehm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A point or compact set lies outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested case is outside what the library models (e.g. unbounded sets).
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// An erosion produced the empty set where a nonempty domain was required.
class DomainCollapsed : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

/// A numeric Cauchy search did not settle. Diagnostic, not a disproof.
class NoRegularizerFound : public Error {
 public:
  using Error::Error;
};

/// Sections handed to a gluing routine do not agree on an overlap.
class SectionsDisagree : public Error {
 public:
  using Error::Error;
};

}  // namespace boehm
