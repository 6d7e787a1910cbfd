#include "errors.hpp"

namespace heatlab {

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::range_error: return "range-error";
    case ErrorCode::numerical_failure: return "numerical-failure";
    case ErrorCode::io_error: return "io-error";
    }
    return "unknown";
}

}  // namespace heatlab
