#pragma once

#include <stdexcept>
#include <string>

namespace pexfem {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: config keys, file formats, incompatible sizes.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure: solver divergence, rank deficiency, blow-up.
class NumericError : public Error {
public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace pexfem
