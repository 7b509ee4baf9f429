#pragma once

#include <stdexcept>
#include <string>

namespace tug {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read, or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// File contents do not match the expected on-disk layout.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Inputs violate a documented precondition.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// A computation produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace tug
