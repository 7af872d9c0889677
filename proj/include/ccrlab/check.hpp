#pragma once

#include <cmath>
#include <limits>

namespace ccrlab {

// Running maximum of check residuals; a NaN sticks so that it fails any `<= tol` test.
inline double nan_max(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::numeric_limits<double>::quiet_NaN();
  return a < b ? b : a;
}

}  // namespace ccrlab
