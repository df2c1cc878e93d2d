#pragma once

#include <functional>

namespace cholera::numerics {

struct RootBracket {
    double lo = 0.0;
    double hi = 0.0;
};

/// Brent's method (bisection safeguarded secant / inverse quadratic steps).
///
/// Requires lo < hi and f(lo) * f(hi) <= 0. Returns a point inside the
/// bracket whose enclosing sub-bracket is no wider than `tol`; an exact zero
/// at either endpoint is returned as is. Throws NumericalError when there is
/// no sign change or the iteration budget runs out.
double find_root(const std::function<double(double)>& f, RootBracket bracket,
                 double tol = 1e-12, int max_iter = 200);

}  // namespace cholera::numerics
