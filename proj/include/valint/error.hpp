#pragma once

#include <stdexcept>
#include <string>

namespace valint {

/// Stable error codes. The numeric value is the code shown to users as `E0NN`.
enum class ErrorCode : int {
  kSyntax = 1,
  kUnboundName = 2,
  kRebound = 3,
  kType = 4,
  kDimension = 5,
  kDomain = 6,
  kSession = 7,
  kPrecisionExhausted = 10,
  kSingular = 11,
  kDepthLimit = 12,
  kCheckFailed = 20,
};

/// "E001", "E010", ...
std::string code_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

[[noreturn]] inline void precision_exhausted(const std::string& what) {
  throw Error(ErrorCode::kPrecisionExhausted, "precision exhausted: " + what);
}

}  // namespace valint
