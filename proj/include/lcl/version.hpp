#pragma once

namespace lcl {

inline constexpr const char* kVersion = "0.1.0";

}
