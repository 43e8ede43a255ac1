#pragma once

namespace opinionforge {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace opinionforge
