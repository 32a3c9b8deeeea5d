#pragma once

#include <stdexcept>
#include <string>

namespace layoutforge {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document; the message names the source and the field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed data that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Unknown instance or key.
class LookupError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

/// Denoising removed every sample of a relation.
class EmptyRelationError : public Error {
 public:
  using Error::Error;
};

/// A hyper key references a secondary with no pairwise relation to its dominant.
class UnsatisfiableKeyError : public Error {
 public:
  using Error::Error;
};

/// A stored prior file exists but cannot be decoded.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace layoutforge
