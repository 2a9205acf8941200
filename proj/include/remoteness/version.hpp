#pragma once

namespace remoteness {

inline constexpr const char* kToolName = "ri";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace remoteness
