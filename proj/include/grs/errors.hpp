#pragma once

#include <stdexcept>
#include <string>

namespace grs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input with wrong shape, non-finite entries or out-of-range scalars.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A matrix that must be invertible is singular within tolerance.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double min_singular_value)
      : Error(what), min_singular_value_(min_singular_value) {}
  double min_singular_value() const noexcept { return min_singular_value_; }

 private:
  double min_singular_value_;
};

/// Lf + LG == 0: the dynamics are fully known and local knowledge gives no
/// finite knowledge ball. Use classical reachability instead.
class DegenerateKnowledgeError : public Error {
 public:
  using Error::Error;
};

/// The state lies outside the region where any velocity is guaranteed.
class EmptyGuaranteeError : public Error {
 public:
  using Error::Error;
};

/// The zero level of a value function reached the edge of the grid.
class BoundaryContactError : public Error {
 public:
  using Error::Error;
};

/// A numerical result contradicts an invariant that should hold by
/// construction (for instance an extracted control leaving the unit ball).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// A benchmark horizon outside its admissible range.
class HorizonRangeError : public Error {
 public:
  using Error::Error;
};

}  // namespace grs
