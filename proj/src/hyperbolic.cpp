#include "um/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace um {

namespace {

constexpr double kSeriesCut = 1e-4;  // |x| below this: Taylor branch
constexpr double kExpGuard = 350.0;  // beyond this, e^{-2x} underflows anyway

void check_arg(double x, const char* fn) {
  if (std::isnan(x)) throw std::invalid_argument(std::string(fn) + ": NaN argument");
}

}  // namespace

double sinhc(double x) {
  check_arg(x, "sinhc");
  const double ax = std::fabs(x);
  if (ax < kSeriesCut) {
    const double x2 = x * x;
    return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sinh(x) / x;
}

double tanhc(double x) {
  check_arg(x, "tanhc");
  const double ax = std::fabs(x);
  if (ax < kSeriesCut) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 + 2.0 * x2 * x2 / 15.0;
  }
  return std::tanh(x) / x;
}

double cothc(double x) {
  check_arg(x, "cothc");
  const double ax = std::fabs(x);
  if (ax < kSeriesCut) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  if (ax > kExpGuard) return ax;  // coth saturates at 1
  return x / std::tanh(x);
}

double cschc(double x) {
  check_arg(x, "cschc");
  const double ax = std::fabs(x);
  if (ax < kSeriesCut) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  if (ax > kExpGuard) return 2.0 * ax * std::exp(-ax);
  return x / std::sinh(x);
}

}  // namespace um
