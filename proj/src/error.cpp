#include "tethersim/error.hpp"

namespace tethersim {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DegenerateLink: return "DegenerateLink";
    case ErrorCode::InvalidElevation: return "InvalidElevation";
    case ErrorCode::NoAccessibleRooftop: return "NoAccessibleRooftop";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code)
{
}

}  // namespace tethersim
