#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tethersim {

enum class ErrorCode {
    DegenerateLink,
    InvalidElevation,
    NoAccessibleRooftop,
    InvalidArgument,
    Config,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a stable error code; what() is prefixed with the code name.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace tethersim
