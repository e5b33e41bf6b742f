#pragma once

#include <stdexcept>
#include <string>

namespace logflow {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid or domain specification violates its invariants.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// det D^2u <= 0 or lambda_min <= 0 at some interior node.
class NonConvexityError : public Error {
 public:
  NonConvexityError(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

class BoundaryInconsistency : public Error {
 public:
  using Error::Error;
};

class TailError : public Error {
 public:
  using Error::Error;
};

class BlowupError : public Error {
 public:
  using Error::Error;
};

class SingularStartError : public Error {
 public:
  using Error::Error;
};

class NewtonStall : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class EscapeError : public Error {
 public:
  using Error::Error;
};

class EmptyCoincidenceError : public Error {
 public:
  using Error::Error;
};

class WindowEscape : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class MissingArtifact : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace logflow
