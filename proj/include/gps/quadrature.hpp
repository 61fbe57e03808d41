#pragma once

#include <functional>

namespace gps::quad {

struct Result {
    double value = 0.0;
    double err_bound = 0.0;  // accumulated |GK15 - G7| estimates
    int panels = 0;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b] to absolute tolerance abs_tol.
// Integrands are expected smooth inside; callers split at known kinks
// (window edges, taper joins) before calling.
Result adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double abs_tol, int max_depth = 48);

// Non-adaptive composite GK15 with fixed panel width h (last panel clipped).
// err_bound is the summed Kronrod-Gauss discrepancy, an estimate not a bound.
Result composite_gk(const std::function<double(double)>& f, double a, double b,
                    double h);

}  // namespace gps::quad
