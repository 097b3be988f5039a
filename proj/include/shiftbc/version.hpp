#pragma once

namespace shiftbc {

inline constexpr const char* kVersion = "shiftbc 0.1.0";

}  // namespace shiftbc
