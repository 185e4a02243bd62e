#pragma once

#include <string_view>

namespace chrank {

inline constexpr std::string_view kToolName = "chrank";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace chrank
