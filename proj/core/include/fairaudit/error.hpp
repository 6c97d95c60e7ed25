#pragma once

#include <stdexcept>
#include <string>

namespace fairaudit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data (bad file, unknown code, shape mismatch).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument to a numeric or statistical routine.
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace fairaudit
