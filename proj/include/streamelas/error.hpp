#pragma once

#include <stdexcept>
#include <string>

namespace streamelas {

enum class ErrorCode {
  MalformedHeader,
  Truncated,
  UnsupportedDepth,
  FormatError,
  WriteError,
  IoError,
  InputTooSmall,
  ShapeError,
  DegenerateInput,
  InvalidConfig,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace streamelas
