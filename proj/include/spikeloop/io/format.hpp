#pragma once

#include <cstdio>
#include <string>

namespace spikeloop::io {

/// 17 significant digits: enough for exact double round-trips.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace spikeloop::io
