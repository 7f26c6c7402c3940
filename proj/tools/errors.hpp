#pragma once

#include <string>

namespace simtool {

// Exit codes double as machine-readable error categories.
enum class ErrorCategory : int {
  kSchema = 2,   // config or data file does not match the schema
  kIo = 3,       // file system failures
  kDomain = 4,   // parameter outside its documented domain
  kNumeric = 5,  // root finding or fitting failed to converge
};

struct CliError {
  ErrorCategory category;
  std::string message;
};

inline const char* category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kSchema: return "schema";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kDomain: return "domain";
    case ErrorCategory::kNumeric: return "numeric";
  }
  return "unknown";
}

}  // namespace simtool
