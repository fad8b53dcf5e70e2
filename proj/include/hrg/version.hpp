#pragma once

namespace hrg {

inline constexpr const char* kVersion = "0.1.0";

} // namespace hrg
