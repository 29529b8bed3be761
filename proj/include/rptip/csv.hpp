#pragma once

#include <cstdio>
#include <string>

namespace rptip {

/// Fixed-format number for CSV output, locale independent.
inline std::string fmt(double v, int digits = 12) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace rptip
