#pragma once

#include <stdexcept>
#include <string>

namespace relcat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad construction data: out-of-range index, duplicate labels, shape mismatch.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Two cells that do not compose (middle sets or 1-cells disagree).
class CompositionError : public Error {
 public:
  using Error::Error;
};

// An operation was called on an input that violates its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace relcat
