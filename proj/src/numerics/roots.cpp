#include "cholera/numerics/roots.hpp"

#include "cholera/numerics/errors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace cholera::numerics {

double find_root(const std::function<double(double)>& f, RootBracket bracket, double tol,
                 int max_iter) {
    if (!(bracket.lo < bracket.hi))
        throw ValidationError("bracket", "lo must be strictly less than hi");
    if (!(tol > 0.0)) throw ValidationError("tol", "must be positive");

    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw NumericalError("find_root: non-finite value at bracket endpoint");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw NumericalError("find_root: no sign change on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");

    // b is the best estimate, [b, c] always brackets the root.
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
            const double min2 = std::abs(e * q);
            if (2.0 * p < std::min(min1, min2)) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += std::abs(d) > tol1 ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
        if (!std::isfinite(fb)) throw NumericalError("find_root: non-finite function value");
    }
    throw NumericalError("find_root: iteration budget exhausted");
}

}  // namespace cholera::numerics
