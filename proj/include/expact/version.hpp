#pragma once

namespace expact {

inline constexpr const char* version = "0.1.0";

}  // namespace expact
