#include "smalife/error.hpp"

namespace smalife {

std::string_view to_string(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::config: return "config";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::io: return "io";
    case ErrorCategory::identifiability: return "identifiability";
    case ErrorCategory::stuck: return "stuck";
    case ErrorCategory::precondition: return "precondition";
  }
  return "unknown";
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error(ErrorCategory::parse, "line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

}  // namespace smalife
