#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace equibench {

enum class ErrorCode {
  InvalidArgument,
  DegenerateNoise,
  DegenerateSignal,
  DegenerateInput,
  OutOfRange,
  NoRealRoot,
  SizeCap,
  NotImplemented,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Library-wide exception; `code()` distinguishes the failure classes that
/// callers are expected to handle (retry on NoRealRoot, subsample on SizeCap).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace equibench
