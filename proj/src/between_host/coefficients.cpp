#include "cholera/between_host/coefficients.hpp"

#include "cholera/numerics/errors.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace cholera::between_host {

Coefficient Coefficient::constant(double c) {
    return {fmt::format("constant({})", c), [c](double) { return c; }};
}

Coefficient Coefficient::linear(double a, double b) {
    return {fmt::format("linear({}, {})", a, b), [a, b](double w) { return a + b * w; }};
}

Coefficient Coefficient::exponential(double a, double b) {
    return {fmt::format("exponential({}, {})", a, b),
            [a, b](double w) { return a * std::exp(b * w); }};
}

Coefficient Coefficient::table(std::vector<double> x, std::vector<double> y) {
    if (x.size() < 2 || x.size() != y.size())
        throw ValidationError("table", "needs at least two (x, y) pairs of equal length");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw ValidationError("table.x", "must be strictly increasing");
    const std::string desc = fmt::format("table({} points on [{}, {}])", x.size(), x.front(), x.back());
    return {desc, [x = std::move(x), y = std::move(y)](double w) {
                const double span = x.back() - x.front();
                if (w < x.front() - 1e-12 * span || w > x.back() + 1e-12 * span)
                    throw ValidationError("table", fmt::format("omega={} outside the table", w));
                w = std::clamp(w, x.front(), x.back());
                auto it = std::upper_bound(x.begin(), x.end(), w);
                std::size_t i = it == x.end() ? x.size() - 1 : static_cast<std::size_t>(it - x.begin());
                i = std::max<std::size_t>(i, 1);
                const double s = (w - x[i - 1]) / (x[i] - x[i - 1]);
                return (1.0 - s) * y[i - 1] + s * y[i];
            }};
}

WithinHostLink within_host_link(const within_host::Params& p) {
    p.validate();
    const double w_fold = within_host::fold_w(p);
    if (!(w_fold > 0.0))
        throw ValidationError("within_host", "manifold tip lies at negative immune status");
    // The tip itself is a double root; rounding can push it just outside.
    auto p_plus = [p, w_fold](double w) {
        return within_host::infected_branch_p(p, std::min(w, w_fold * (1.0 - 1e-15)));
    };
    WithinHostLink link;
    link.omega0 = w_fold;
    link.P = Coefficient("within-host P+(omega)", p_plus);
    link.g = Coefficient("within-host kappa P+(omega) - c omega",
                         [p, p_plus](double w) { return p.kappa * p_plus(w) - p.c * w; });
    return link;
}

}  // namespace cholera::between_host
