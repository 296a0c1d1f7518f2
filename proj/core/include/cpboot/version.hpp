#pragma once

#include <string_view>

namespace cpboot {

inline constexpr std::string_view k_version = "0.1.0";

}  // namespace cpboot
