#pragma once

#include <stdexcept>
#include <string>

namespace heatlab {

// Numeric values match heatlab_status in the public C header.
enum class ErrorCode {
    invalid_argument = 1,
    range_error = 2,
    numerical_failure = 3,
    io_error = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(ErrorCode::invalid_argument, what) {}
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& what) : Error(ErrorCode::range_error, what) {}
};

class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& what) : Error(ErrorCode::numerical_failure, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::io_error, what) {}
};

const char* error_code_name(ErrorCode code) noexcept;

}  // namespace heatlab
