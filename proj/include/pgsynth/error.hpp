#pragma once

#include <stdexcept>
#include <string>

namespace pgsynth {

// Error categories, aligned with the CLI exit codes: invalid input -> 2,
// resource limits -> 3, everything else is a plain failure.
enum class ErrorKind {
  kInvalidInput,   // malformed documents, violated preconditions, bad markings
  kLimitExceeded,  // state/cut limits hit during exploration
  kUnrealizable,   // requested a strategy for an unrealizable game
  kInternal,       // broken invariant inside the library
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error invalid_input(const std::string& message) {
  return Error(ErrorKind::kInvalidInput, message);
}

inline Error limit_exceeded(const std::string& message) {
  return Error(ErrorKind::kLimitExceeded, message);
}

}  // namespace pgsynth
