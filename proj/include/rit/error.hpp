#pragma once

#include <stdexcept>
#include <string>

namespace rit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (file contents, out-of-range indices).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Parameters that violate a documented precondition.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rit
