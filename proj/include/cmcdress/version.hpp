#pragma once

namespace cmcdress {

inline constexpr const char* kVersion = "0.1.0";

} // namespace cmcdress
