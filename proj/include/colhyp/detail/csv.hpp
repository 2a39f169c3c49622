#pragma once

#include <cstdio>
#include <string>

namespace colhyp::detail {

/// Round-trip decimal representation with '.' separator, independent of locale settings
/// that std::ostream might carry.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace colhyp::detail
