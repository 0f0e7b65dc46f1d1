#pragma once

namespace omdiss {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace omdiss
