#pragma once

namespace nkls {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nkls
