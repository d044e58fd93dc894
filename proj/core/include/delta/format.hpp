#pragma once

#include <cstdio>
#include <string>

#include "delta/vec3.hpp"

namespace delta {

/// Fixed 9-decimal rendering used by every CSV and CLI output so repeated
/// runs are byte-identical.
inline std::string fixed9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9f", v);
  return buf;
}

inline std::string fixed9(const Vec3& v, char sep = ',') {
  std::string s = fixed9(v.x);
  s += sep;
  s += fixed9(v.y);
  s += sep;
  s += fixed9(v.z);
  return s;
}

}  // namespace delta
