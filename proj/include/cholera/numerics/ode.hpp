#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

namespace cholera::numerics {

using Vector = Eigen::VectorXd;

/// dy/dt = f(t, y)
using VectorField = std::function<Vector(double t, const Vector& y)>;

enum class OdeMethod {
    RungeKutta4,       // fixed step
    DormandPrince45,   // adaptive, embedded 4th-order error estimate
};

struct IntegratorSpec {
    OdeMethod method = OdeMethod::DormandPrince45;
    /// Fixed step for RK4, initial trial step for the adaptive method.
    double step = 1e-2;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    /// Upper bound on the adaptive step (useful when samples must resolve
    /// oscillations).
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 20'000'000;

    void validate() const;

    static IntegratorSpec fixed(double h) {
        IntegratorSpec s;
        s.method = OdeMethod::RungeKutta4;
        s.step = h;
        return s;
    }
    static IntegratorSpec adaptive(double rtol, double atol) {
        IntegratorSpec s;
        s.rel_tol = rtol;
        s.abs_tol = atol;
        return s;
    }
};

struct Interval {
    double start = 0.0;
    double end = 0.0;
};

/// Scalar event g(t, y). A sign change of g across an accepted step is
/// located by bisection inside that step.
struct EventSpec {
    std::function<double(double t, const Vector& y)> fn;
    /// +1: only rising crossings, -1: only falling crossings, 0: both.
    int direction = 0;
    /// Stop integration at the event.
    bool terminal = true;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<Vector> y;
    std::optional<double> event_time;
    std::optional<Vector> event_state;

    std::size_t size() const { return t.size(); }
    const Vector& back() const { return y.back(); }
};

/// Integrates y' = f(t, y) over `span` (start < end) and returns the state at
/// every accepted step, starting with (start, y0). When an event fires the
/// crossing is located to a relative tolerance of 1e-10 by bisection on the
/// bracketing step and appended as the final sample if the event is terminal.
///
/// Throws NumericalError on step-count exhaustion or non-finite states.
Trajectory integrate_ode(const VectorField& rhs, const Vector& y0, Interval span,
                         const IntegratorSpec& spec,
                         const std::optional<EventSpec>& event = std::nullopt);

/// One step of the chosen method without error control. Exposed for the
/// convergence tests.
Vector rk4_step(const VectorField& rhs, double t, const Vector& y, double h);

}  // namespace cholera::numerics
