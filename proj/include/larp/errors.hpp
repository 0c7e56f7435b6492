#pragma once

#include <stdexcept>
#include <string>

namespace larp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates a construction or scenario invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Start and goal lie in disconnected parts of the routing network.
class NoPathError : public Error {
 public:
  using Error::Error;
};

/// A query point lies outside the decomposed field, or in a blocked cell.
class OutOfFieldError : public Error {
 public:
  using Error::Error;
};

/// Force-based planners cannot evaluate a force while standing on a restriction.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace larp
