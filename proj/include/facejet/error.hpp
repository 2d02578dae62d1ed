#pragma once

#include <stdexcept>
#include <string>

namespace facejet {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing, unreadable or semantically invalid input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Unsupported or malformed image file.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

/// Eye coordinates that do not define a usable similarity transform.
class GeometryError : public DataError {
 public:
  using DataError::DataError;
};

/// Inputs that are individually valid but do not fit together
/// (e.g. probe dimensions vs. gallery).
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace facejet
