#include "cholera/numerics/ode.hpp"

#include "cholera/numerics/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cholera::numerics {

void IntegratorSpec::validate() const {
    if (!(step > 0.0) || !std::isfinite(step))
        throw ValidationError("integrator.step", "must be positive and finite");
    if (method == OdeMethod::DormandPrince45) {
        if (!(rel_tol > 0.0))
            throw ValidationError("integrator.rel_tol", "must be positive");
        if (!(abs_tol > 0.0))
            throw ValidationError("integrator.abs_tol", "must be positive");
        if (!(max_step > 0.0))
            throw ValidationError("integrator.max_step", "must be positive");
    }
    if (max_steps < 1)
        throw ValidationError("integrator.max_steps", "must be at least 1");
}

Vector rk4_step(const VectorField& rhs, double t, const Vector& y, double h) {
    const Vector k1 = rhs(t, y);
    const Vector k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const Vector k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const Vector k4 = rhs(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct DpStep {
    Vector y;
    Vector err;
};

DpStep dp45_step(const VectorField& rhs, double t, const Vector& y, double h) {
    const Vector k1 = rhs(t, y);
    const Vector k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Vector k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Vector k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vector k5 = rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vector k6 =
        rhs(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    Vector ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vector k7 = rhs(t + h, ynew);
    Vector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {std::move(ynew), std::move(err)};
}

bool all_finite(const Vector& y) { return y.allFinite(); }

bool crosses(double g0, double g1, int direction) {
    const bool falling = g0 > 0.0 && g1 <= 0.0;
    const bool rising = g0 < 0.0 && g1 >= 0.0;
    if (direction < 0) return falling;
    if (direction > 0) return rising;
    return falling || rising;
}

}  // namespace

Trajectory integrate_ode(const VectorField& rhs, const Vector& y0, Interval span,
                         const IntegratorSpec& spec, const std::optional<EventSpec>& event) {
    spec.validate();
    if (!(span.end > span.start))
        throw ValidationError("t_span", "end must exceed start");
    if (!all_finite(y0)) throw NumericalError("integrate_ode: non-finite initial state");

    const bool adaptive = spec.method == OdeMethod::DormandPrince45;
    auto single_step = [&](double t, const Vector& y, double h) -> Vector {
        return adaptive ? dp45_step(rhs, t, y, h).y : rk4_step(rhs, t, y, h);
    };

    Trajectory out;
    out.t.push_back(span.start);
    out.y.push_back(y0);

    double t = span.start;
    Vector y = y0;
    double h = std::min(spec.step, span.end - span.start);
    if (adaptive) h = std::min(h, spec.max_step);
    double g_prev = event ? event->fn(t, y) : 0.0;
    const double t_eps = 1e-14 * std::max(1.0, std::abs(span.end));

    std::size_t steps = 0;
    while (t < span.end - t_eps) {
        if (++steps > spec.max_steps)
            throw NumericalError("integrate_ode: step budget of " +
                                 std::to_string(spec.max_steps) + " exhausted at t=" +
                                 std::to_string(t));
        h = std::min(h, span.end - t);

        Vector y_next;
        double h_taken = h;
        if (adaptive) {
            for (;;) {
                DpStep s = dp45_step(rhs, t, y, h);
                double norm = 0.0;
                for (Eigen::Index i = 0; i < y.size(); ++i) {
                    const double scale =
                        spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(s.y[i]));
                    const double e = s.err[i] / scale;
                    norm += e * e;
                }
                norm = std::sqrt(norm / static_cast<double>(std::max<Eigen::Index>(1, y.size())));
                if (!std::isfinite(norm)) {
                    h *= 0.25;
                } else if (norm <= 1.0) {
                    y_next = std::move(s.y);
                    h_taken = h;
                    const double fac =
                        norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
                    h = std::min(h * fac, spec.max_step);
                    break;
                } else {
                    h *= std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 1.0);
                }
                if (h < 1e-14 * std::max(1.0, std::abs(t)))
                    throw NumericalError("integrate_ode: step size underflow at t=" +
                                         std::to_string(t));
            }
        } else {
            y_next = rk4_step(rhs, t, y, h);
        }
        if (!all_finite(y_next))
            throw NumericalError("integrate_ode: non-finite state at t=" + std::to_string(t));

        const double t_next = t + h_taken;
        if (event) {
            const double g_next = event->fn(t_next, y_next);
            if (!out.event_time && crosses(g_prev, g_next, event->direction)) {
                // Bisection on the bracketing step, re-stepping from (t, y).
                double lo = 0.0, hi = h_taken;
                const double tol = 1e-10 * std::max(1.0, std::abs(t));
                Vector y_hi = y_next;
                while (hi - lo > tol) {
                    const double mid = 0.5 * (lo + hi);
                    Vector y_mid = single_step(t, y, mid);
                    if (crosses(g_prev, event->fn(t + mid, y_mid), event->direction)) {
                        hi = mid;
                        y_hi = std::move(y_mid);
                    } else {
                        lo = mid;
                    }
                }
                out.event_time = t + hi;
                out.event_state = y_hi;
                if (event->terminal) {
                    out.t.push_back(t + hi);
                    out.y.push_back(std::move(y_hi));
                    return out;
                }
            }
            g_prev = g_next;
        }
        t = t_next;
        y = std::move(y_next);
        out.t.push_back(t);
        out.y.push_back(y);
    }
    return out;
}

}  // namespace cholera::numerics
