#pragma once

#include <stdexcept>
#include <string>

namespace rkha {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in lattices of different rank.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Two operands carry different weights.
class WeightMismatch : public Error {
 public:
  using Error::Error;
};

/// A configured size cap (grid points, support size, radius) was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The requested query is not available for this weight family.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// Invalid argument: violated precondition on a parameter or an input object.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a solver (e.g. square root of a function
/// that is not strictly positive).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The function comes within the vanishing threshold somewhere on the check
/// grid, so no inverse is attempted.
class NotInvertible : public Error {
 public:
  using Error::Error;
};

/// A certified report came back inconclusive where a bounded one is required.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace rkha
