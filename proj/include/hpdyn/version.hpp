#pragma once

#define HPDYN_VERSION "0.1.0"

namespace hpdyn {
inline constexpr const char* version = HPDYN_VERSION;
}
