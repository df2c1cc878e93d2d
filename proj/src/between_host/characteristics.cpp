#include "cholera/between_host/characteristics.hpp"

#include "cholera/numerics/errors.hpp"
#include "cholera/numerics/roots.hpp"

#include <cmath>

namespace cholera::between_host {

double characteristics_eval(double t, double omega, const Params& p,
                            const std::function<double(double)>& initial_density,
                            const std::function<double(double)>& boundary_history,
                            std::size_t panels) {
    if (t < 0.0) throw ValidationError("t", "must be non-negative");
    if (t == 0.0) return initial_density(omega);
    const double G_w = immune_time(omega, p, panels);
    if (G_w > t) {
        const double target = G_w - t;
        const double w_s = numerics::find_root(
            [&](double x) { return immune_time(x, p, panels) - target; }, {0.0, omega}, 1e-13);
        return initial_density(w_s) * p.g(w_s) / p.g(omega) *
               std::exp(-log_survival(w_s, omega, p, panels));
    }
    return boundary_history(t - G_w) * survival_pi(omega, p, panels);
}

}  // namespace cholera::between_host
