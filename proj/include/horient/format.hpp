#pragma once

#include <cstdio>
#include <string>

namespace horient {

/// Compact fixed formatting for CSV artifacts; %.9g keeps files small and
/// byte-stable across runs.
inline std::string fmt_g9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace horient
