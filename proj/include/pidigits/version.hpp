#pragma once

namespace pidigits {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace pidigits
