#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace adeco {

/// Shortest-stable text for CSV output: 17 significant digits, "inf"/"-inf"/"nan".
[[nodiscard]] inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace adeco
