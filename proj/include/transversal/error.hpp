#pragma once

#include <stdexcept>
#include <string>

namespace transversal {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Angle tuple does not satisfy 0 <= a_1 < a_2 < ... < a_k < 2*pi.
class NotOrdered : public Error {
 public:
  explicit NotOrdered(const std::string& what = "angle tuple is not strictly ordered in [0, 2*pi)")
      : Error(what) {}
};

/// Point set has no two-dimensional extent (e.g. all points collinear).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A certificate claims something its own records do not support.
class InconsistentInputs : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace transversal
