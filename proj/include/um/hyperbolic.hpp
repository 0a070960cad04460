#pragma once

namespace um {

// Hyperbolic "cardinal" variants. All four have a removable singularity
// at x = 0 which is filled with the limit value 1; near zero they switch
// to truncated Taylor series so no 0/0 cancellation occurs.
//
//   sinhc x = sinh(x)/x        tanhc x = sinhc(x)/cosh(x) = tanh(x)/x
//   cothc x = 1/tanhc(x)       cschc x = 1/sinhc(x) = x/sinh(x)
//
// cothc grows like x and cschc decays like 2x e^{-x}; both are evaluated
// through exp-based forms with overflow guards for large arguments.
// A NaN argument throws std::invalid_argument.
double sinhc(double x);
double tanhc(double x);
double cothc(double x);
double cschc(double x);

}  // namespace um
