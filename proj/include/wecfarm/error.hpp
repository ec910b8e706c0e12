#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wecfarm {

enum class ErrorCode {
  invalid_argument,
  extrapolation_refused,
  invalid_layout,
  solver_failure,
  invalid_climate,
  undefined_q,
  invalid_budget,
  invalid_params,
  invalid_start,
  parse_error,
  io_error,
  unknown_algorithm,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; the code lets callers branch without
// string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wecfarm
