#pragma once

namespace polyclust {

inline constexpr const char* kVersion = "0.1.0";

} // namespace polyclust
