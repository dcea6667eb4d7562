#pragma once

#include <stdexcept>
#include <string>

namespace g2lab {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  invalid_argument = 1,
  sampling_violation = 2,
  memory_budget = 3,
  empty_result = 4,
  zero_intensity = 5,
  no_spacing = 6,
  unsupported = 7,
  io = 8,
  parse = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace g2lab
