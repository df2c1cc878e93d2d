#pragma once

#include "cholera/numerics/ode.hpp"

#include <Eigen/Core>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace cholera::numerics {

/// F(x, p) = 0 defines the branch.
using Residual = std::function<Vector(const Vector& x, double p)>;
/// Optional analytic dF/dx; finite differences are used when absent.
using StateJacobian = std::function<Eigen::MatrixXd(const Vector& x, double p)>;

struct ContinuationOptions {
    double newton_tol = 1e-11;
    int newton_max_iter = 30;
    /// Step halvings allowed before giving up on a step.
    int max_retries = 10;
    /// Relative perturbation for central-difference Jacobians.
    double fd_rel_step = 1e-6;
    /// Hard cap on stored points (natural plus arclength).
    int max_points = 0;  // 0 -> 20 * n_steps
    std::optional<Vector> lower_bounds;
    std::optional<Vector> upper_bounds;
    StateJacobian jacobian;
};

enum class StepMode { Natural, Arclength };

struct ContinuationPoint {
    double parameter = 0.0;
    Vector x;
    std::vector<std::complex<double>> eigenvalues;
    double determinant = 0.0;
    StepMode mode = StepMode::Natural;
};

struct FoldPoint {
    double parameter = 0.0;
    Vector x;
};

enum class BranchTermination { ReachedEnd, LeftParameterRange, LeftStateBounds, PointBudget };

struct ContinuationResult {
    std::vector<ContinuationPoint> points;
    std::vector<FoldPoint> folds;
    BranchTermination termination = BranchTermination::ReachedEnd;
};

/// One-parameter equilibrium continuation of F(x, p) = 0 from (x0, p_range.start)
/// toward p_range.end in `n_steps` natural-parameter steps with a Newton
/// corrector. When Newton fails (typically at a turning point) the
/// continuation switches to pseudo-arclength stepping and keeps going until
/// the branch leaves the parameter range, leaves the state bounds, or the
/// point budget runs out. Turning points of p along the arclength are
/// refined to the zero of the tangent's parameter component.
///
/// Throws NumericalError if the starting point cannot be corrected or a
/// step fails after all retries.
ContinuationResult continue_branch(const Residual& residual, const Vector& x0, Interval p_range,
                                   int n_steps, const ContinuationOptions& options = {});

/// Central-difference dF/dx with relative perturbation `rel`.
Eigen::MatrixXd fd_state_jacobian(const Residual& residual, const Vector& x, double p,
                                  double rel = 1e-6);

}  // namespace cholera::numerics
