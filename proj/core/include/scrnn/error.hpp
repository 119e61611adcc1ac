#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scrnn {

enum class ErrorCategory {
  config,     // bad configuration key or value
  parameter,  // invalid numeric parameter (temperature, bandwidth, ...)
  argument,   // invalid call (empty input, non-scalar loss, ...)
  data,       // malformed or missing input data
  shape,      // dimension mismatch
  numeric,    // NaN / Inf produced
  internal,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error(ErrorCategory::config, message) {}
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& message)
      : Error(ErrorCategory::parameter, message) {}
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& message)
      : Error(ErrorCategory::argument, message) {}
};

class DataError : public Error {
 public:
  explicit DataError(const std::string& message) : Error(ErrorCategory::data, message) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& message) : Error(ErrorCategory::shape, message) {}
};

class NumericError : public Error {
 public:
  explicit NumericError(const std::string& message) : Error(ErrorCategory::numeric, message) {}
};

}  // namespace scrnn
