#pragma once

#define LIEWAVE_VERSION "1.0.0"

namespace liewave {

inline const char* version() { return LIEWAVE_VERSION; }

}  // namespace liewave
