#pragma once

namespace sdde {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sdde
