#include "wecfarm/error.hpp"

namespace wecfarm {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::extrapolation_refused: return "extrapolation-refused";
    case ErrorCode::invalid_layout: return "invalid-layout";
    case ErrorCode::solver_failure: return "solver-failure";
    case ErrorCode::invalid_climate: return "invalid-climate";
    case ErrorCode::undefined_q: return "undefined-q";
    case ErrorCode::invalid_budget: return "invalid-budget";
    case ErrorCode::invalid_params: return "invalid-params";
    case ErrorCode::invalid_start: return "invalid-start";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::io_error: return "io-error";
    case ErrorCode::unknown_algorithm: return "unknown-algorithm";
  }
  return "unknown";
}

}  // namespace wecfarm
