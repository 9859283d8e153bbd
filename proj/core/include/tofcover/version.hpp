#pragma once

namespace tofcover {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tofcover
