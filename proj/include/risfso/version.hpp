#pragma once

namespace risfso {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace risfso
