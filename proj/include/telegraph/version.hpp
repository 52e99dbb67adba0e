#pragma once

namespace telegraph {

inline constexpr const char* kVersion = "0.2.0";

}  // namespace telegraph
