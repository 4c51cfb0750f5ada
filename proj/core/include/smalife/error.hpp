#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smalife {

/// Coarse failure class. The CLI prints it as the machine-parsable prefix of
/// its single-line error message and maps it to an exit code.
enum class ErrorCategory {
  config,           // parameters violate a documented invariant
  parse,            // malformed CSV or config text
  io,               // file missing or unwritable
  identifiability,  // regression has no unique solution
  stuck,            // a trial stopped making progress
  precondition,     // caller passed data the operation cannot accept
};

std::string_view to_string(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCategory::precondition, what) {}
};

class IdentifiabilityError : public Error {
 public:
  explicit IdentifiabilityError(const std::string& what)
      : Error(ErrorCategory::identifiability, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCategory::io, what) {}
};

/// Parse failure tied to a 1-based line of the offending file.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }
  /// Message without the "line N: " prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

}  // namespace smalife
