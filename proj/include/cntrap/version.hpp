#pragma once

namespace cntrap {
inline constexpr const char* version = "1.0.0";
}
