#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rapidip {

enum class ErrorCode {
  EmptyBox,
  InvalidModel,
  MalformedSection,
  UnknownRowReference,
  UnknownColumnReference,
  NonNumericField,
  IterationGuard,
  NotPureInteger,
  AllFixed,
  InvalidConfig,
  MissingPair,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Exception type for every failure raised by the library. The code is the
/// machine-readable part; what() carries context such as line numbers or paths.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rapidip
