#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chrank {

/// Failure categories surfaced to callers; the CLI maps them to exit codes.
enum class ErrorKind {
  invalid_spec,          // inconsistent problem dimensions or rank
  parse,                 // malformed mask / spec text
  io,                    // file system failure
  numeric_input,         // non-finite or out-of-range matrix entries
  config,                // bad option values (non-prime modulus, zero samples, ...)
  unsupported,           // operation not defined for this problem variant
  backend_disagreement,  // exact and floating-point ranks differ
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace chrank
